declare function init(): void;
class C {
  static {
    init();
  }
}
