declare const y: number;
let satisfies = 0;
const x = y
satisfies;
