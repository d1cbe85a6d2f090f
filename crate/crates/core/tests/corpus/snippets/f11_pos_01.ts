type P = [first: string, second?: number, ...rest: boolean[]];
