/*@ assigns x; */
void update(void) {
  int x = 0;
  x = x + 1;
}
