type Q = 1;
export { type Q };
