#include <doctest.h>

TEST_SUITE("phasematch") {}
