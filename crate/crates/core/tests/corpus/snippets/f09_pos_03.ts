function f(x: `#${string}`) {}
