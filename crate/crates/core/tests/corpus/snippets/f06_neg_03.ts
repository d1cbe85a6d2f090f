const obj = { static: {} };
