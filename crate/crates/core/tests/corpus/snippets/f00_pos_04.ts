function f(x: unknown) {
  return (x satisfies unknown) ?? null;
}
