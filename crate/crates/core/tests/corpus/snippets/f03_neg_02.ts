type M<T> = { [K in keyof T]: T[K] };
