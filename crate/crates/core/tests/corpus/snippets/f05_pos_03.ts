export { default } from "./d.json" assert { type: "json" };
