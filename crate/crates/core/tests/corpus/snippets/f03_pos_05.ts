const C = class <out T> {
  x!: T;
};
