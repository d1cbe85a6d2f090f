const K = class {
  static {
    console.log("k");
  }
};
