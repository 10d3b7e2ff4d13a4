#include <cstdio>

int main() {
    std::puts("punch: placeholder");
    return 0;
}
