type Z<T> = T extends [infer A extends number, infer B extends number] ? [A, B] : [];
