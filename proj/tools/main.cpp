#include <iostream>

int main() {
  std::cout << "spiralspec cli placeholder\n";
  return 0;
}
