type W<T> = T extends Promise<infer U> ? U extends string ? U : never : never;
