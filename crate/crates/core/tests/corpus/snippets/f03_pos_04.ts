class State<in out T> {
  value!: T;
}
