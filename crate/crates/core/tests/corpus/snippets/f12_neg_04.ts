declare let a: boolean, b: boolean, c: boolean;
if (a || (b = c)) {
}
