type T = typeof import("./x.json", { assert: { type: "json" } });
