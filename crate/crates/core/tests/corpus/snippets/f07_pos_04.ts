class A {}
class B extends A {
  constructor(override readonly a: number) {
    super();
  }
}
