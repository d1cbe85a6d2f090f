function assert(c: unknown): asserts c {}
