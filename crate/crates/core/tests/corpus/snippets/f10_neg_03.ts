type I = { [key: string]: number };
