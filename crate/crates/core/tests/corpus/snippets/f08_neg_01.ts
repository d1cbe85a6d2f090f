type C = new () => object;
