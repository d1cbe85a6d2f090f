class A {
  static accessor count: number = 0;
}
