class A {
  override() {}
}
