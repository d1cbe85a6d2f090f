class A {
  get value() { return 1; }
  set value(v) {}
}
