class A {
  override
  m() {}
}
