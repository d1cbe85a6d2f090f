// import x from "y" assert { type: "json" }
const s = 'import x from "y" assert { type: "json" }';
