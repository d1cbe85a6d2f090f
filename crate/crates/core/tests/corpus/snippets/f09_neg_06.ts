declare const a: number;
let v: string = `${a}`;
