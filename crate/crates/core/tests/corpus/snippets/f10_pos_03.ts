type R<T> = { readonly [K in keyof T as K]-?: T[K] };
