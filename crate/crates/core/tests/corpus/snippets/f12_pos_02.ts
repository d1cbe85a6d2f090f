declare const obj: { x: number };
obj.x &&= 1;
