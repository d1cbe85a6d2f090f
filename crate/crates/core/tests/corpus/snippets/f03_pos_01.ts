interface Box<out T> {
  get(): T;
}
