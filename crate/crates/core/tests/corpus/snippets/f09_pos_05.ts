interface I {
  key: `k_${string}`;
}
