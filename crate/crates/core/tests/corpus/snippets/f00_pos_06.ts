class A {
  cfg = { a: 1 } satisfies { a: number };
}
