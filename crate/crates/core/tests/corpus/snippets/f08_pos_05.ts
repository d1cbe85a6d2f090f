let x: (abstract new () => void) | null = null;
