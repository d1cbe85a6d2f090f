function f(override: number) {
  return override;
}
