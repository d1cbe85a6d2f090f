import data from "./data.json";
declare function assert(v: unknown): void;
assert(data);
