interface I {
  override(): void;
}
