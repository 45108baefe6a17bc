#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mvtest/rng.hpp"

using namespace mvtest;

TEST_CASE("rng_new: determinism and seed sensitivity") {
  RngState a = rng_new(42);
  RngState b = rng_new(42);
  for (int i = 0; i < 1000; ++i) CHECK(next_u64(a) == next_u64(b));

  RngState c = rng_new(1);
  RngState d = rng_new(2);
  int differing = 0;
  for (int i = 0; i < 100; ++i) differing += next_u64(c) != next_u64(d);
  CHECK(differing > 90);
}

TEST_CASE("rng_new: seed 0 yields a live stream") {
  RngState st = rng_new(0);
  std::vector<std::uint64_t> outs;
  for (int i = 0; i < 100; ++i) outs.push_back(next_u64(st));
  int distinct = 0;
  for (std::size_t i = 1; i < outs.size(); ++i) distinct += outs[i] != outs[0];
  CHECK(distinct > 90);
  CHECK(st.position == 100);
}

TEST_CASE("state copy resumes the identical sequence, spare included") {
  RngState st = rng_new(99);
  std_normal(st);  // leaves a cached spare behind
  CHECK(st.has_spare);
  RngState copy = st;
  for (int i = 0; i < 50; ++i) CHECK(std_normal(st) == std_normal(copy));
}

TEST_CASE("rng_substream: pure function of seed material and indices") {
  RngState master = rng_new(2024);
  const RngState before = rng_substream(master, 3, 17);
  for (int i = 0; i < 500; ++i) next_u64(master);  // consuming the master changes nothing
  RngState after = rng_substream(master, 3, 17);
  RngState before_copy = before;
  for (int i = 0; i < 200; ++i) CHECK(next_u64(before_copy) == next_u64(after));

  RngState s01 = rng_substream(master, 0, 1);
  RngState s02 = rng_substream(master, 0, 2);
  RngState s10 = rng_substream(master, 1, 0);
  const std::uint64_t a = next_u64(s01), b = next_u64(s02), c = next_u64(s10);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(b != c);
}

TEST_CASE("uniform01: range and coarse uniformity") {
  RngState st = rng_new(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(st);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("std_normal: moments and tail mass over 1e6 draws") {
  RngState st = rng_new(20240814);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const double z = std_normal(st);
    sum += z;
    sumsq += z * z;
    if (std::abs(z) > 1.96) ++tail;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.004);            // 4 sigma/sqrt(n)
  CHECK(std::abs(var - 1.0) < 0.006);       // 4 sqrt(2/n)
  CHECK(std::abs(tail / double(n) - 0.05) < 0.001);
}

TEST_CASE("std_normal: substream moments at 1e5 draws") {
  RngState master = rng_new(5150);
  RngState stream = rng_substream(master, 12, 345);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = std_normal(stream);
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sumsq / n - mean * mean - 1.0) < 0.03);
}

TEST_CASE("std_normal: spare cache pairs draws") {
  RngState st = rng_new(11);
  CHECK_FALSE(st.has_spare);
  std_normal(st);
  CHECK(st.has_spare);
  const std::uint64_t pos = st.position;
  std_normal(st);  // consumes the spare, no uniforms
  CHECK_FALSE(st.has_spare);
  CHECK(st.position == pos);
}

// Frozen first outputs of the documented generator chain. These pin the
// exact sequence (xoshiro256++ seeded via splitmix64, polar normals) so a
// refactor that silently changes any table shows up here first.
TEST_CASE("golden sequences for seed 42") {
  RngState st = rng_new(42);
  const std::uint64_t expected_u64[6] = {15021278609987233951ull, 5881210131331364753ull,
                                         18149643915985481100ull, 12933668939759105464ull,
                                         14637574242682825331ull, 10848501901068131965ull};
  for (std::uint64_t e : expected_u64) CHECK(next_u64(st) == e);

  RngState su = rng_new(42);
  const double expected_uniform[5] = {0.81430514512290986, 0.31882104006166112,
                                      0.98389416817748876, 0.70113559813475557,
                                      0.79350448969172904};
  for (double e : expected_uniform) CHECK(uniform01(su) == e);

  RngState sn = rng_new(42);
  const double expected_normal[10] = {
      0.98139839007249863,  -0.56572010467395595, 1.3403256427520227,
      0.40231287029926083,  -0.96422050629413836, 0.27055086445825288,
      0.19622652967452661,  1.1536067585699392,   0.20290854483035597,
      -0.48523781072537336};
  for (double e : expected_normal) CHECK(std_normal(sn) == e);
}

TEST_CASE("golden substream for the default seed") {
  RngState master = rng_new(12345);
  RngState sub = rng_substream(master, 0, 0);
  const std::uint64_t expected_u64[4] = {16642914847752579708ull, 13103136673493600421ull,
                                         10579512585192035887ull, 745942766277240565ull};
  for (std::uint64_t e : expected_u64) CHECK(next_u64(sub) == e);

  RngState sub2 = rng_substream(master, 0, 0);
  const double expected_normal[4] = {0.55131214708749399, 0.28828748974637369,
                                     0.084594160946139529, -0.52881024537170962};
  for (double e : expected_normal) CHECK(std_normal(sub2) == e);
}
