type T = `plain`;
