class C {
  static static() {}
}
