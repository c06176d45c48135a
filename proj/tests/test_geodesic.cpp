#include "doctest.h"
TEST_SUITE("geodesic") {}
