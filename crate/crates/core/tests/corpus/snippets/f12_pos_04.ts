let y: number | undefined;
let x = (y ??= 3);
