declare let a: number, b: number;
a != b;
a <<= 1;
a >>>= 2;
