type R<F> = F extends (...args: any[]) => (infer Ret extends Promise<unknown> ? Ret : never) ? 1 : 0;
