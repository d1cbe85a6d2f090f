type P<T> = T extends { a: infer A extends string } ? A : 0;
