type G<T> = T extends [infer H, ...infer R] ? [H, R] : never;
