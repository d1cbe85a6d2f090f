declare let a: number | null, b: number, c: number;
a ?? (b = c);
