type El<T> = T extends Array<infer E extends object> ? E : never;
