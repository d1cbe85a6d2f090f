// type T = `${string}`
const c = 1;
