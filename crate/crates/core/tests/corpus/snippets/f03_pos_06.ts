interface Pair<in K extends string, out V = unknown> {
  k: K;
  v: V;
}
