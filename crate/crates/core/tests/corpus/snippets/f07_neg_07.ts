class A {
  override = 1;
}
