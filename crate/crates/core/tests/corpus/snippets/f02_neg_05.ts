interface A<T extends string> {}
type B<T extends number> = T;
