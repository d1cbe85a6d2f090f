class A {
  static accessor() {}
}
