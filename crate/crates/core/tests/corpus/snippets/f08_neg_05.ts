type T = { abstract: new () => void };
