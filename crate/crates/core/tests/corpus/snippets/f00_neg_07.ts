interface Foo {}
declare const y: unknown;
const z = y as Foo;
