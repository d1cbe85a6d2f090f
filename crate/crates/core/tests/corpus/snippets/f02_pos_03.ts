type X<T> = T extends infer U extends string ? U : never;
