import type X from "m";
import type * as NS from "n";
