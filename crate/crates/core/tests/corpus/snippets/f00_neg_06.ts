type satisfies = string;
let v: satisfies = "";
