type C = abstract new () => object;
