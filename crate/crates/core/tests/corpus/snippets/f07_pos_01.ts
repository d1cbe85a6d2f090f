class A { m() {} }
class B extends A {
  override m() {}
}
