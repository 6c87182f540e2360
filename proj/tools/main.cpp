#include <cstdio>

int main() {
  std::puts("softarm cli placeholder");
  return 0;
}
