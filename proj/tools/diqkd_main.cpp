#include <cstdio>

int main() {
  std::puts("diqkd: placeholder");
  return 0;
}
