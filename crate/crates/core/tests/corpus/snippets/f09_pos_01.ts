type T = `v${number}`;
