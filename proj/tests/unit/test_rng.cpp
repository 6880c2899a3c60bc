#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "mde/rng.hpp"

using mde::Rng;

// Expected words come from a separate Python transcription of SplitMix64 and
// xoshiro256**.
TEST_CASE("xoshiro256** stream is fixed") {
  Rng zero(0);
  CHECK(zero.next() == 0x99ec5f36cb75f2b4ULL);
  CHECK(zero.next() == 0xbf6e1f784956452aULL);
  CHECK(zero.next() == 0x1a5f849d4933e6e0ULL);

  Rng answer(42);
  CHECK(answer.next() == 0x15780b2e0c2ec716ULL);
  CHECK(answer.next() == 0x6104d9866d113a7eULL);
  CHECK(answer.next() == 0xae17533239e499a1ULL);
}

TEST_CASE("derive_seed is a fixed function") {
  CHECK(mde::derive_seed(1, 2) == 0x4744ff373c92600dULL);
  CHECK(mde::derive_seed(0, 0) == 0x75856f745165f252ULL);
  CHECK(mde::derive_seed(7, 0) != mde::derive_seed(7, 1));
  static_assert(mde::derive_seed(3, 4) == mde::derive_seed(3, 4));
}

TEST_CASE("bounded draws stay in range and cover it") {
  Rng rng(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 800);
  CHECK(rng.below(1) == 0);
  CHECK(rng.below(0) == 0);
}

TEST_CASE("uniform and normal draws") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("shuffle is a seeded permutation") {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  Rng(9).shuffle(std::span<int>(a));
  Rng(9).shuffle(std::span<int>(b));
  CHECK(a == b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ident(50);
  std::iota(ident.begin(), ident.end(), 0);
  CHECK(sorted == ident);
  CHECK(a != ident);
}

TEST_CASE("split leaves the parent untouched") {
  Rng parent(3);
  Rng copy(3);
  Rng child = parent.split(1);
  CHECK(parent.next() == copy.next());
  CHECK(child.next() != Rng(3).split(2).next());
}
