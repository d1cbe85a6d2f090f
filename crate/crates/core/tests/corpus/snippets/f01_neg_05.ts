interface I {
  accessor: string;
}
