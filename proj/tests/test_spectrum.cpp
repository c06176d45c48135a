#include "doctest.h"
TEST_SUITE("spectrum") {}
