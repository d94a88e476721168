#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace maizx {
namespace {

using testing::kind_of;
using testing::t2022;

TEST(ComputeCf, Examples) {
  EXPECT_DOUBLE_EQ(compute_cf(1.0, 1.5, 300.0), 450.0);
  EXPECT_EQ(compute_cf(12.3, 1.7, 0.0), 0.0);
  EXPECT_NEAR(compute_cf(0.1667, 1.0, 100.0), 16.67, 1e-9);
}

TEST(ComputeCf, DomainErrors) {
  EXPECT_EQ(kind_of([] { compute_cf(-1.0, 1.0, 1.0); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { compute_cf(1.0, 0.99, 1.0); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { compute_cf(1.0, 1.0, -1.0); }), ErrorKind::DomainError);
}

TEST(NodeFootprint, Elementwise) {
  const Node node("n", Zone("ES"), 1.0, 0, 300, 1);
  const CarbonIntensitySeries ci(Zone("ES"), t2022(), {100, 200});
  const auto fp = node_footprint(node, std::vector<double>{0.3, 0.3}, ci);
  ASSERT_EQ(fp.values.size(), 2u);
  EXPECT_NEAR(fp.values[0], 30.0, 1e-12);
  EXPECT_NEAR(fp.values[1], 60.0, 1e-12);

  const auto zero = node_footprint(node, std::vector<double>{0.0, 0.0}, ci);
  EXPECT_EQ(zero.total(), 0.0);

  const Node doubled("n", Zone("ES"), 2.0, 0, 300, 1);
  const auto fp2 = node_footprint(doubled, std::vector<double>{0.3, 0.3}, ci);
  for (std::size_t h = 0; h < 2; ++h) EXPECT_DOUBLE_EQ(fp2.values[h], 2.0 * fp.values[h]);
}

TEST(NodeFootprint, Errors) {
  const Node node("n", Zone("ES"), 1.0, 0, 300, 1);
  EXPECT_EQ(kind_of([&] { node_footprint(node, std::vector<double>{1.0}, CarbonIntensitySeries(Zone("ES"), t2022(), {1, 2})); }),
            ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([&] { node_footprint(node, std::vector<double>{1.0}, CarbonIntensitySeries(Zone("NL"), t2022(), {1})); }),
            ErrorKind::ZoneMismatch);
}

TEST(ComputeCf, LinearityAndMonotonicity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double e = 100 * u(rng), pue = 1 + u(rng), ci = 900 * u(rng), a = 10 * u(rng);
    EXPECT_LE(testing::rel_err(compute_cf(a * e, pue, ci), a * compute_cf(e, pue, ci)), 1e-12);
    const double bump = u(rng);
    EXPECT_GE(compute_cf(e + bump, pue, ci), compute_cf(e, pue, ci));
    EXPECT_GE(compute_cf(e, pue + bump, ci), compute_cf(e, pue, ci));
    EXPECT_GE(compute_cf(e, pue, ci + bump), compute_cf(e, pue, ci));
  }
}

// Summing energy first is only equivalent to summing footprints when the
// intensity is flat.
TEST(NodeFootprint, SumExchange) {
  const Node node("n", Zone("ES"), 1.2, 0, 300, 1);
  const std::vector<double> energy{0.1, 0.5, 0.2};
  double total_energy = 0.0;
  for (double e : energy) total_energy += e;

  const CarbonIntensitySeries flat(Zone("ES"), t2022(), {250, 250, 250});
  EXPECT_NEAR(node_footprint(node, energy, flat).total(), compute_cf(total_energy, 1.2, 250), 1e-9);

  const CarbonIntensitySeries varying(Zone("ES"), t2022(), {100, 400, 250});
  double mean_ci = (100 + 400 + 250) / 3.0;
  EXPECT_GT(std::abs(node_footprint(node, energy, varying).total() - compute_cf(total_energy, 1.2, mean_ci)), 1.0);
}

}  // namespace
}  // namespace maizx
