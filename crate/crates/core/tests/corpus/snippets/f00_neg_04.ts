function satisfies(a: number) {
  return a;
}
satisfies(3);
