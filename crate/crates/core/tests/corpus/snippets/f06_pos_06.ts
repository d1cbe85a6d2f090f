class C {
  static #p = 1;
  static {
    C.#p++;
  }
}
