#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sclab/rng.hpp"

using namespace sclab;

TEST_CASE("philox known-answer vectors") {
  // Zero counter and key.
  const Philox4x32::Block zeros = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(zeros[0] == 0x6627e8d5u);
  CHECK(zeros[1] == 0xe169c58du);
  CHECK(zeros[2] == 0xbc57ac4cu);
  CHECK(zeros[3] == 0x9b00dbd8u);

  // Keyed double-block construction pinned against an independent
  // implementation of the same algorithm.
  const Philox4x32::Block mix = Philox4x32::block({0, 0, 0, 0}, {0x3ec8f720u, 0x02461e29u});
  const Philox4x32::Key key2{mix[0], mix[1]};
  const Philox4x32::Block b0 = Philox4x32::block({0, 0, mix[2], mix[3]}, key2);
  const Philox4x32::Block b1 = Philox4x32::block({1, 0, mix[2], mix[3]}, key2);
  CHECK(b0 == Philox4x32::Block{0xe79b028eu, 0xa0da5e89u, 0x4de6687au, 0xabe2a952u});
  CHECK(b1 == Philox4x32::Block{0x2131bd46u, 0x5bef67f0u, 0xcbe772b0u, 0x8319355cu});
}

TEST_CASE("streams are pure functions of (seed, index)") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

  // Interleaving another stream does not disturb the sequence.
  RngStream c(42, 7);
  RngStream other(42, 8);
  RngStream reference(42, 7);
  for (int i = 0; i < 64; ++i) {
    other.next_u64();
    CHECK(c.next_u64() == reference.next_u64());
  }
}

TEST_CASE("distinct indices and seeds give distinct output") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  RngStream c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 32; ++i) {
    const auto va = a.next_u64();
    if (va == b.next_u64()) ++same_ab;
    if (va == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform stays inside the open unit interval with the right moments") {
  RngStream stream(2024, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = stream.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12).epsilon(0.02));
}

TEST_CASE("normal moments") {
  RngStream stream(2024, 1);
  const int n = 400000;
  double sum = 0.0, sumsq = 0.0, sumcube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = stream.normal();
    sum += z;
    sumsq += z * z;
    sumcube += z * z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1.0).scale(5.0 / std::sqrt(n)));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::fabs(sumcube / n) < 5.0 * std::sqrt(15.0 / n));
}

TEST_CASE("exponential moments") {
  RngStream stream(2024, 2);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = stream.exponential(2.0);
    CHECK(e > 0.0);
    sum += e;
    sumsq += e * e;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sumsq / n == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("derive_seed separates purposes") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
