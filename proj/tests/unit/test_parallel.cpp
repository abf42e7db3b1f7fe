#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "qdarp/parallel.hpp"

using namespace qdarp;

TEST_CASE("every index runs exactly once") {
  for (unsigned w : {1u, 3u, 8u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), w, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) CHECK(h == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no tasks expected"); });
}

TEST_CASE("lowest failing index wins") {
  for (unsigned w : {1u, 4u}) {
    std::atomic<int> ran{0};
    try {
      parallel_for(200, w, [&](std::size_t i) {
        ++ran;
        if (i == 37 || i == 150) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  ::setenv(kWorkersEnvVar, "5", 1);
  CHECK(resolve_workers(0) == 5);
  ::setenv(kWorkersEnvVar, "junk", 1);
  CHECK(resolve_workers(0) >= 1);
  ::unsetenv(kWorkersEnvVar);
  CHECK(resolve_workers(0) >= 1);
}
