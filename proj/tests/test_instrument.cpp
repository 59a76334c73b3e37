#include <doctest.h>

TEST_SUITE("instrument") {}
