const infer = 1;
let y = infer;
