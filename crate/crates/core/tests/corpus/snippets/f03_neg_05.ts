type out = string;
interface I<T extends out> {}
