class A { static s() {} }
class B extends A {
  static override s() {}
}
