import { a as b } from "m";
