import { type default as Def } from "m";
