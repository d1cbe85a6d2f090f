type Route = { path: string };
const routes = [
  { path: "/" },
] as const satisfies readonly Route[];
