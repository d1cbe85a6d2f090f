import "./side.css" assert { type: "css" };
