int testme(int n, int valeur, int t[2]) {
  int ok;
  int i;
  ok = 1;
  if (valeur < 0)
    ok = 0;
  for (i = 0; i < n; i = i + 1) {
    if (t[i] < valeur)
      ok = 0;
  }
  return ok;
}
