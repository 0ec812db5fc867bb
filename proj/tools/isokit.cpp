#include <cstdio>

int main() {
  std::puts("isokit: not wired up yet");
  return 1;
}
