class A { async run() {} }
class B extends A {
  override async run(): Promise<void> {}
}
