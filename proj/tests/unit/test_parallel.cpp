#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "fredlab/parallel.hpp"

using namespace fredlab;

TEST_CASE("every index runs exactly once") {
  for (int threads : {1, 2, 7}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) CHECK(h == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no tasks expected"); });
}

TEST_CASE("exceptions reach the caller") {
  std::atomic<int> ran{0};
  CHECK_THROWS_WITH_AS(parallel_for(50, 3,
                                    [&](std::size_t i) {
                                      ++ran;
                                      if (i == 17) throw std::runtime_error("task 17");
                                    }),
                       "task 17", std::runtime_error);
  CHECK(ran.load() >= 1);
}

TEST_CASE("thread count parsing") {
  CHECK(parse_threads("4") == 4);
  CHECK(parse_threads("auto") >= 1);
  CHECK_THROWS_AS(parse_threads("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_threads("3x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_threads(""), std::invalid_argument);

  CHECK(resolve_threads(std::string("2")) == 2);
  setenv("THREADS", "5", 1);
  CHECK(resolve_threads(std::nullopt) == 5);
  CHECK(resolve_threads(std::string("3")) == 3);
  setenv("THREADS", "auto", 1);
  CHECK(resolve_threads(std::nullopt) >= 1);
  unsetenv("THREADS");
  CHECK(resolve_threads(std::nullopt) >= 1);
}
