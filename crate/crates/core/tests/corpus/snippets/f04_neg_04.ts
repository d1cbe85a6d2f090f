import { type as T } from "m";
