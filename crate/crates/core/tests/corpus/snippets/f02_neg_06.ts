// type X<T> = T extends [infer H extends string] ? H : 0
type S = "infer X extends Y";
