#include "ellparity/rational.hpp"
#include <cstdio>
int main() { return 0; }
