declare class D<out T> {
  t: T;
}
