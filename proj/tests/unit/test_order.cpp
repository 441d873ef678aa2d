#include <doctest.h>

TEST_SUITE_BEGIN("order");
TEST_SUITE_END();
