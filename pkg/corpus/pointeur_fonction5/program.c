int f0(int x) { return x + 2; }

int f1(int x) { return x; }

int f2(int x) { return x - 1; }

unsigned int testme( int a, int b){
  int (*fp)(int);
  if (a == 0)
    fp = f0;
  else if (a == 1)
    fp = f1;
  else
    fp = f2;
  return fp(a + b);
}
