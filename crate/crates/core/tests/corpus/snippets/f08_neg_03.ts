interface I {
  new (): I;
}
