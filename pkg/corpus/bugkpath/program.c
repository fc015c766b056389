#define BUFSZ 100

void testme (char *msg, int len, char *buffer)
{
  int i;
  int j;
  int limit = BUFSZ - 1;
  for (i = 0; i < len; ) {
    for (j = 0; i < len && j < limit; ){
      buffer[j] = msg[i];
      if (msg[i] == '\n' && msg[i+1] == '.') {
        buffer[j+1] = msg[i+1];
        buffer[j+2] = '.';
        j = j + 2;
      }
      i = i + 1;
      j = j + 1;
    }
  }
}
