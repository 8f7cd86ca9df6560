#include <iostream>
int main() { std::cout << "cychom stub\n"; return 0; }
