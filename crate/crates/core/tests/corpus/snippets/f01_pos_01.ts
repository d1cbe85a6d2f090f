class A {
  accessor name = "";
}
