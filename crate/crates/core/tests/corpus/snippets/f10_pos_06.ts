let m: { [K in "a" | "b" as K]: number };
