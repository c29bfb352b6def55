#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "sbv/parallel.hpp"
#include "sbv/rng.hpp"

using namespace sbv;

TEST_CASE("splitmix64 reference outputs") {
  Rng a(0);
  CHECK(a.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(a.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(a.next_u64() == 0x06c45d188009454fULL);
  Rng b(1234567);
  CHECK(b.next_u64() == 0x599ed017fb08fc85ULL);
  CHECK(b.next_u64() == 0x2c73f08458540fa5ULL);
  CHECK(b.next_u64() == 0x883ebce5a3f27c77ULL);
}

TEST_CASE("uniform doubles: range, reference value, mean") {
  Rng r(42);
  CHECK(r.uniform() == doctest::Approx(0.7415648787718233).epsilon(1e-15));
  CHECK(r.uniform() == doctest::Approx(0.1599103928769201).epsilon(1e-15));
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
  Rng s(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform(-2.0, 3.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 3.0);
  }
}

TEST_CASE("below is in-range and roughly uniform") {
  Rng r(99);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(1) == 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const std::uint64_t v = r.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(c > 9000);  // expected 10000 per bucket
    CHECK(c < 11000);
  }
}

TEST_CASE("streams: equal keys agree, distinct keys diverge") {
  Rng a = stream(5, 1, 2, 3);
  Rng b = stream(5, 1, 2, 3);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c = stream(5, 1, 2, 4);
  Rng d = stream(6, 1, 2, 3);
  bool differs_c = false, differs_d = false;
  Rng a2 = stream(5, 1, 2, 3);
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t v = a2.next_u64();
    differs_c |= (v != c.next_u64());
    differs_d |= (v != d.next_u64());
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

namespace {

std::set<std::pair<std::size_t, std::size_t>> record_chunks(std::size_t n,
                                                            std::size_t grain) {
  std::set<std::pair<std::size_t, std::size_t>> chunks;
  std::mutex m;
  parallel_for(n, grain, [&](std::size_t b, std::size_t e) {
    std::lock_guard lock(m);
    chunks.insert({b, e});
  });
  return chunks;
}

}  // namespace

TEST_CASE("parallel_for covers the range once at any thread count") {
  const std::size_t n = 100003;
  std::vector<int> hits1(n, 0), hits8(n, 0);
  set_thread_count(1);
  parallel_for(n, 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits1[i];
  });
  set_thread_count(8);
  parallel_for(n, 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits8[i];
  });
  CHECK(hits1 == hits8);
  CHECK(std::accumulate(hits1.begin(), hits1.end(), 0) == static_cast<int>(n));

  SUBCASE("chunk boundaries independent of thread count") {
    set_thread_count(1);
    const auto serial = record_chunks(5000, 77);
    set_thread_count(8);
    const auto parallel = record_chunks(5000, 77);
    CHECK(serial == parallel);
  }
  set_thread_count(0);  // back to environment default
}

TEST_CASE("nested parallel_for degrades to serial instead of deadlocking") {
  set_thread_count(4);
  std::atomic<int> total{0};
  parallel_for(8, 1, [&](std::size_t, std::size_t) {
    parallel_for(16, 4, [&](std::size_t b, std::size_t e) {
      total += static_cast<int>(e - b);
    });
  });
  CHECK(total.load() == 8 * 16);
  set_thread_count(0);
}

TEST_CASE("zero-length and tiny ranges") {
  bool ran = false;
  parallel_for(0, 16, [&](std::size_t, std::size_t) { ran = true; });
  CHECK_FALSE(ran);
  int count = 0;
  parallel_for(3, 100, [&](std::size_t b, std::size_t e) {
    count += static_cast<int>(e - b);
  });
  CHECK(count == 3);
}
