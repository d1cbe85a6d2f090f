type G<T> = { [K in keyof T as `get${string & K}`]: T[K] };
