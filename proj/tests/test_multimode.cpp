#include <doctest.h>

TEST_SUITE("multimode") {}
