type Nested = `a${`b${string}`}`;
