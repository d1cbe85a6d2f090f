type U<T> = { -readonly [K in keyof T as Uppercase<K & string>]+?: T[K] };
