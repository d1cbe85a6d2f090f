type Fn<in A, out R> = (a: A) => R;
