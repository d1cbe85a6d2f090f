declare const c: boolean, a: number, b: number;
const t = [c ? a : b];
