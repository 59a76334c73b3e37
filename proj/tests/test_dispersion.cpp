#include <doctest.h>

TEST_SUITE("dispersion") {}
