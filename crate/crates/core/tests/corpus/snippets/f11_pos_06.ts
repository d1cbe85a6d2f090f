type Opt = [a?: string];
