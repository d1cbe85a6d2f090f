import { type A, b } from "./a";
