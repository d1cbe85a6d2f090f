interface I {
  make: abstract new () => I;
}
