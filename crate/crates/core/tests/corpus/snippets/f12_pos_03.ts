declare const cache: Record<string, number>;
declare function compute(k: string): number;
declare const k: string;
cache[k] ??= compute(k);
