declare const first: number, second: number;
const arr = [first, second];
