#include "doctest.h"
TEST_SUITE("neck") {}
