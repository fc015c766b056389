#include "apache.h"

unsigned mystrlen(char *s)
{
  int i;
  i = 0;
  while (s[i] != EOS)
    ++i;
  return i;
}

int mystrncmp (const char *s1, const char *s2, int n)
{
  int i;
  int retval;
  i = 0;
  do {
    retval = s1[i] - s2[i];
    if (i >= n-1) return retval;
    if (retval != 0) return retval;
    if (s1[i] == EOS) return 0;
    i++;
  } while (1);
}

void testme (char *uri, int scheme)
{
  int cp;
  int c,i;
  char LDAP[5]={"ldap"};
  char *token[TOKEN_SZ];
  if (scheme == 0
      || mystrlen(uri) < scheme) {
    return;
  }
  cp = scheme;

  if (uri[cp-1] == '/') {

    while (uri[cp] != EOS
           && uri[cp] != '/') {
      ++cp;
    }
    if (uri[cp] == EOS || uri[cp+1] == EOS) return;
    ++cp;
    scheme = cp;
    if (mystrncmp(uri, LDAP, LDAP_SZ) == 0) {
      c = 0;
      token[0] = uri;

      while (uri[cp] != EOS
             && c < TOKEN_SZ) {
        if (uri[cp] == '?') {
          ++c;
          token[c] = uri + cp + 1;
          uri[cp] = EOS;
        }
        ++cp;
      }
      return;
    }
  }
  return;
}
