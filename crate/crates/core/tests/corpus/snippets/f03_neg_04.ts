declare const obj: object;
if ("a" in obj) {
}
