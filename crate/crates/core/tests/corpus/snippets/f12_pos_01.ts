declare let a: boolean, b: boolean;
a ||= b;
