type G = abstract new <T>(x: T) => T;
