const C = class {
  accessor value = 42;
};
