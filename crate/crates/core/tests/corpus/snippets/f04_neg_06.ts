const s = "import { type A } from 'x'";
