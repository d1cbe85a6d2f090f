let [a, b]: [string, number] = ["", 0];
