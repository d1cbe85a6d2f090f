abstract class A { abstract m(): void; }
abstract class B extends A {
  abstract override m(): void;
}
