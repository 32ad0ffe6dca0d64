#include <stdio.h>
#include <zlib.h>

int main(void) {
  const unsigned long* table = get_crc_table();
  printf("%p\n", (const void*)table);
  return 0;
}
