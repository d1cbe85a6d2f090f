const o = { satisfies: true };
o.satisfies;
