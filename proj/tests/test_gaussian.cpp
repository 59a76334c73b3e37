#include <doctest.h>

TEST_SUITE("gaussian") {}
