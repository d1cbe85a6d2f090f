export type { T } from "./t";
