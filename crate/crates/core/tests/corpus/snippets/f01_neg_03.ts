const accessor = { get x() { return 1; } };
accessor.x;
