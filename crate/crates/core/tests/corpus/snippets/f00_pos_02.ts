interface Config { port: number }
export default { port: 8080 } satisfies Config;
