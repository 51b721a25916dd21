#include <cstdio>
int main() { std::puts("cli_tests: placeholder"); return 1; }
