type V<T> = T extends (infer U extends string ? 1 : 0) ? 1 : 0;
