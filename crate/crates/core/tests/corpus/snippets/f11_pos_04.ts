let p: [start: Date, end: Date];
