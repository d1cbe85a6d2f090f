const handler = ((e: Event) => e.type) satisfies (e: Event) => string;
