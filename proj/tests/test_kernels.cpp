#include "catch_amalgamated.hpp"
TEST_CASE("placeholder kernels") { SUCCEED(); }
