declare let a: boolean, b: boolean;
a = a || b;
