const assert = { type: "json" };
