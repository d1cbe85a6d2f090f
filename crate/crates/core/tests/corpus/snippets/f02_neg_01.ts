type U<T> = T extends Array<infer E> ? E : never;
