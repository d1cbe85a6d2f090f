abstract class A {
  abstract accessor id: string;
}
