/*@ assigns *x; */
void update(int *x) {
  *x = *x + 1;
}
