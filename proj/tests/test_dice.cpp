#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qeo/dice.hpp"
#include "qeo/poly_parse.hpp"
#include "qeo/random.hpp"

namespace {

using qeo::MultiIndex;
using qeo::Polynomial;
using qeo::SimplexPoint;
using qeo::dice::Atom;
using qeo::dice::ExchangeabilityError;
using qeo::dice::ProbabilityTable;
using qeo::dice::SignedMeasure;

Polynomial worked_g() { return qeo::parse_polynomial(qeo::dice::kWorkedExamplePolynomial, 6); }

MultiIndex pair(std::size_t k, std::size_t i, std::size_t j) {
  return MultiIndex::unit(k, i) + MultiIndex::unit(k, j);
}

double tuple_prob(const ProbabilityTable& t, std::vector<int> faces) { return t.at(faces); }

// Independent oracle: with the counted normalization, the best constant is
// the smallest ratio coeff_n / multinomial(n) of the homogenized polynomial.
double closed_form_lower_prevision(const Polynomial& g, int r) {
  const auto h = qeo::homogenize(g, r);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& n : qeo::enumerate_multiindices(g.num_vars(), r))
    best = std::min(best, h.coefficient(n) / static_cast<double>(qeo::multinomial(n)));
  return best;
}

std::vector<Polynomial> sample_polynomials() {
  return {
      worked_g(),
      qeo::parse_polynomial("th1", 6),
      qeo::parse_polynomial("0.3", 6),
      qeo::parse_polynomial("th1*th2 - 0.5*th3^2 + th4*th5*th6", 6),
      qeo::parse_polynomial("th1^3 - 2*th1*th2 + 0.1", 6),
      qeo::parse_polynomial("th1^2 - th1*th2 + th2^2 + 0.05", 3),
      qeo::parse_polynomial("-th1*th2 - th2*th3 + 0.2*th1", 3),
  };
}

TEST(CheckExchangeable, UniformTable) {
  ProbabilityTable t(6, 2);
  std::fill(t.values.begin(), t.values.end(), 1.0 / 36.0);
  EXPECT_NO_THROW(qeo::dice::check_exchangeable(t));
}

TEST(CheckExchangeable, PairExclusionTable) {
  const auto p = qeo::dice::check_exchangeable(qeo::dice::pair_exclusion_table(6));
  EXPECT_DOUBLE_EQ(tuple_prob(p.table(), {0, 1}), 1.0 / 30.0);
  EXPECT_DOUBLE_EQ(tuple_prob(p.table(), {3, 3}), 0.0);
}

TEST(CheckExchangeable, ReportsPermutationViolation) {
  ProbabilityTable t(2, 2);
  t.values = {0.25, 0.35, 0.15, 0.25};  // P(1,2) != P(2,1)
  try {
    qeo::dice::check_exchangeable(t);
    FAIL() << "expected a permutation violation";
  } catch (const ExchangeabilityError& e) {
    EXPECT_EQ(e.kind(), ExchangeabilityError::Kind::PermutationViolation);
    EXPECT_EQ(e.first(), (std::vector<int>{0, 1}));
    EXPECT_EQ(e.second(), (std::vector<int>{1, 0}));
  }
}

TEST(CheckExchangeable, ReportsNormalizationAndSign) {
  ProbabilityTable t(2, 1);
  t.values = {0.5, 0.4};
  try {
    qeo::dice::check_exchangeable(t);
    FAIL();
  } catch (const ExchangeabilityError& e) {
    EXPECT_EQ(e.kind(), ExchangeabilityError::Kind::NotNormalized);
  }
  t.values = {1.5, -0.5};
  try {
    qeo::dice::check_exchangeable(t);
    FAIL();
  } catch (const ExchangeabilityError& e) {
    EXPECT_EQ(e.kind(), ExchangeabilityError::Kind::Negative);
  }
}

TEST(Mixture, DiracAtUniform) {
  const auto p = qeo::dice::mixture_probability(SignedMeasure::dirac(SimplexPoint::uniform(6)), 6, 2);
  for (double v : p.table().values) EXPECT_NEAR(v, 1.0 / 36.0, 1e-15);
}

TEST(Mixture, DiracAtVertex) {
  const auto p = qeo::dice::mixture_probability(SignedMeasure::dirac(SimplexPoint::vertex(6, 0)), 6, 3);
  for (std::size_t f = 0; f < p.table().values.size(); ++f)
    EXPECT_DOUBLE_EQ(p.table().values[f], f == 0 ? 1.0 : 0.0);
}

TEST(Mixture, TwoVertexAtoms) {
  const SignedMeasure q({Atom{0.5, SimplexPoint::vertex(6, 0)}, Atom{0.5, SimplexPoint::vertex(6, 1)}});
  const auto p = qeo::dice::mixture_probability(q, 6, 2);
  EXPECT_DOUBLE_EQ(tuple_prob(p.table(), {0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(tuple_prob(p.table(), {1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(tuple_prob(p.table(), {0, 1}), 0.0);
}

TEST(Mixture, RejectsNegativeWeights) {
  const SignedMeasure nu({Atom{2.0, SimplexPoint::vertex(6, 0)}, Atom{-1.0, SimplexPoint::vertex(6, 1)}});
  EXPECT_THROW(qeo::dice::mixture_probability(nu, 6, 1), qeo::StructuralError);
}

TEST(SignedMeasure, RequiresUnitMass) {
  EXPECT_THROW(SignedMeasure({Atom{0.9, SimplexPoint::vertex(3, 0)}}), qeo::StructuralError);
}

TEST(SignedMixture, NonnegativeMatchesMixture) {
  qeo::Rng rng(4);
  const SignedMeasure q({Atom{0.3, qeo::random_simplex_point(4, rng)}, Atom{0.7, qeo::random_simplex_point(4, rng)}});
  const auto a = qeo::dice::mixture_probability(q, 4, 3);
  const auto b = qeo::dice::signed_mixture_probability(q, 4, 3);
  EXPECT_TRUE(b.valid);
  for (std::size_t f = 0; f < a.table().values.size(); ++f) EXPECT_NEAR(a.table().values[f], b.table.values[f], 1e-15);
}

TEST(SignedMixture, FlagsNegativeEntries) {
  const SignedMeasure nu({Atom{2.0, SimplexPoint::vertex(6, 0)}, Atom{-1.0, SimplexPoint::vertex(6, 1)}});
  const auto t = qeo::dice::signed_mixture_probability(nu, 6, 1);
  EXPECT_FALSE(t.valid);
  EXPECT_FALSE(t.violation.empty());
  EXPECT_DOUBLE_EQ(t.table.values[0], 2.0);
  EXPECT_DOUBLE_EQ(t.table.values[1], -1.0);
  EXPECT_DOUBLE_EQ(t.table.values[2], 0.0);
}

TEST(Counts, Uniform) {
  ProbabilityTable t(6, 2);
  std::fill(t.values.begin(), t.values.end(), 1.0 / 36.0);
  const auto c = qeo::dice::exchangeable_to_counts(qeo::dice::check_exchangeable(t));
  EXPECT_NEAR(c.at(pair(6, 0, 1)), 2.0 / 36.0, 1e-15);
  EXPECT_NEAR(c.at(MultiIndex::unit(6, 0, 2)), 1.0 / 36.0, 1e-15);
}

TEST(Counts, PairExclusion) {
  const auto c = qeo::dice::exchangeable_to_counts(qeo::dice::check_exchangeable(qeo::dice::pair_exclusion_table(6)));
  double total = 0.0;
  for (const auto& [n, v] : c) {
    total += v;
    if (*std::max_element(n.counts().begin(), n.counts().end()) == 2) {
      EXPECT_EQ(v, 0.0);
    } else {
      EXPECT_NEAR(v, 1.0 / 15.0, 1e-15);
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Counts, DiracAtVertex) {
  const auto p = qeo::dice::mixture_probability(SignedMeasure::dirac(SimplexPoint::vertex(6, 0)), 6, 3);
  EXPECT_DOUBLE_EQ(qeo::dice::exchangeable_to_counts(p).at(MultiIndex::unit(6, 0, 3)), 1.0);
}

TEST(RepresentSigned, DiracMixtureAtGridPoints) {
  const SignedMeasure q({Atom{0.25, SimplexPoint::grid(MultiIndex{2, 1, 0, 0})},
                         Atom{0.75, SimplexPoint::grid(MultiIndex{0, 1, 1, 1})}});
  const auto p = qeo::dice::mixture_probability(q, 4, 2);
  const auto rep = qeo::dice::represent_signed(p, 3);
  ASSERT_TRUE(rep.found()) << rep.message;
  const auto back = qeo::dice::signed_mixture_probability(*rep.measure, 4, 2);
  for (std::size_t f = 0; f < back.table.values.size(); ++f)
    EXPECT_NEAR(back.table.values[f], p.table().values[f], 1e-12);
  EXPECT_LE(rep.measure->total_variation(), 1.0 + 1e-9);  // a nonnegative measure exists
}

TEST(RepresentSigned, PairExclusionNeedsNegativeWeight) {
  const auto p = qeo::dice::check_exchangeable(qeo::dice::pair_exclusion_table(6));
  const auto rep = qeo::dice::represent_signed(p, 6);
  ASSERT_TRUE(rep.found()) << rep.message;
  EXPECT_TRUE(rep.measure->has_negative_weight(1e-9));
  EXPECT_NEAR(rep.measure->total_weight(), 1.0, 1e-9);
  const auto back = qeo::dice::signed_mixture_probability(*rep.measure, 6, 2);
  for (std::size_t f = 0; f < back.table.values.size(); ++f)
    EXPECT_NEAR(back.table.values[f], p.table().values[f], 1e-8);
}

TEST(RepresentSigned, PairExclusionNonnegativeIsInfeasible) {
  const auto p = qeo::dice::check_exchangeable(qeo::dice::pair_exclusion_table(6));
  const auto rep = qeo::dice::represent_signed(p, 6, /*nonnegative_only=*/true);
  EXPECT_EQ(rep.status, qeo::lp::Status::Infeasible);
  EXPECT_FALSE(rep.found());
}

// Any mixing measure has E[theta_i^2] >= 0 for each i, yet the diagonal
// counts of the pair-exclusion table are all zero, so the only candidate
// puts all mass where every theta_i = 0, which is off the simplex.
TEST(RepresentSigned, PairExclusionInfeasibleAtEveryResolution) {
  const auto p = qeo::dice::check_exchangeable(qeo::dice::pair_exclusion_table(3));
  for (int grid = 1; grid <= 8; ++grid)
    EXPECT_EQ(qeo::dice::represent_signed(p, grid, true).status, qeo::lp::Status::Infeasible) << grid;
}

TEST(RepresentSigned, RoundTripOverSeeds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    qeo::Rng rng(seed);
    const auto grid = qeo::enumerate_multiindices(4, 4);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
      atoms.push_back(Atom{w(rng), SimplexPoint::grid(grid[pick(rng)])});
      total += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= total;
    const auto p = qeo::dice::mixture_probability(SignedMeasure(atoms), 4, 3);
    const auto rep = qeo::dice::represent_signed(p, 4);
    ASSERT_TRUE(rep.found()) << rep.message;
    const auto back = qeo::dice::signed_mixture_probability(*rep.measure, 4, 3);
    for (std::size_t f = 0; f < back.table.values.size(); ++f)
      EXPECT_NEAR(back.table.values[f], p.table().values[f], 1e-8);
  }
}

TEST(LowerPrevision, WorkedPolynomial) {
  const auto lp = qeo::dice::lower_prevision(worked_g(), 2);
  EXPECT_NEAR(lp.value, -0.45, 1e-9);
}

// Bland's rule pins this optimal dual. It is unique here: theta1*theta2 is
// the only monomial whose constraint is tight at the optimum.
TEST(LowerPrevision, WorkedPolynomialDualIsPinned) {
  const auto lp = qeo::dice::lower_prevision(worked_g(), 2);
  for (const auto& [n, v] : lp.dual.values()) {
    EXPECT_NEAR(v, n == pair(6, 0, 1) ? 0.5 : 0.0, 1e-12) << n.to_string();
  }
  EXPECT_NEAR(lp.dual.normalization(), 1.0, 1e-12);
  EXPECT_NEAR(lp.dual.apply(worked_g()), -0.45, 1e-12);
}

TEST(LowerPrevision, Constant) {
  for (int r = 0; r <= 5; ++r) EXPECT_NEAR(qeo::dice::lower_prevision(qeo::parse_polynomial("0.3", 6), r).value, 0.3, 1e-12);
}

TEST(LowerPrevision, SingleCoordinate) {
  EXPECT_NEAR(qeo::dice::lower_prevision(qeo::parse_polynomial("th1", 6), 2).value, 0.0, 1e-12);
}

TEST(LowerPrevision, RejectsLevelBelowDegree) {
  EXPECT_THROW(qeo::dice::lower_prevision(worked_g(), 1), qeo::StructuralError);
}

TEST(LowerPrevision, MatchesClosedFormAndConeProgram) {
  for (const auto& g : sample_polynomials()) {
    for (int r = g.degree(); r <= g.degree() + 3; ++r) {
      const auto lp = qeo::dice::lower_prevision(g, r);
      EXPECT_NEAR(lp.value, closed_form_lower_prevision(g, r), 1e-9) << "r=" << r;
      if (g.num_vars() == 3 || r <= 3) {
        const auto cone = qeo::dice::lower_prevision_cone_lp(g, r);
        ASSERT_TRUE(cone.optimal()) << cone.message;
        EXPECT_NEAR(lp.value, cone.value, 1e-9) << "r=" << r;
      }
    }
  }
}

TEST(LowerPrevision, ShiftedPolynomialIsCertified) {
  for (const auto& g : sample_polynomials()) {
    const int r = g.degree() + 1;
    const auto lp = qeo::dice::lower_prevision(g, r);
    EXPECT_TRUE(qeo::in_bernstein_cone(qeo::homogenize(g - lp.value, r), 1e-9));
    EXPECT_FALSE(qeo::in_bernstein_cone(qeo::homogenize(g - (lp.value + 1e-6), r), 0.0));
  }
}

TEST(Property, Soundness) {
  qeo::Rng rng(8);
  for (const auto& g : sample_polynomials()) {
    for (int r = g.degree(); r <= g.degree() + 2; ++r) {
      const double value = qeo::dice::lower_prevision(g, r).value;
      for (int i = 0; i < 200; ++i) EXPECT_LE(value, g.evaluate(qeo::random_simplex_point(g.num_vars(), rng)) + 1e-12);
      for (std::size_t v = 0; v < g.num_vars(); ++v)
        EXPECT_LE(value, g.evaluate(SimplexPoint::vertex(g.num_vars(), v)) + 1e-12);
    }
  }
}

TEST(Property, MonotoneInLevel) {
  for (const auto& g : sample_polynomials()) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int r = g.degree(); r <= g.degree() + 4; ++r) {
      const double value = qeo::dice::lower_prevision(g, r).value;
      EXPECT_GE(value, prev - 1e-12) << "r=" << r;
      prev = value;
    }
  }
}

TEST(Property, DualAttainsOptimum) {
  for (const auto& g : sample_polynomials()) {
    for (int r = g.degree(); r <= g.degree() + 3; ++r) {
      const auto lp = qeo::dice::lower_prevision(g, r);
      EXPECT_NEAR(lp.dual.apply(g), lp.value, 1e-9);
      EXPECT_NEAR(lp.dual.normalization(), 1.0, 1e-9);
      EXPECT_GE(lp.dual.min_value(), -1e-12);
    }
  }
}

TEST(Sweep, WorkedPolynomialApproachesClassicalMinimum) {
  const auto rows = qeo::dice::convergence_sweep(worked_g(), 2, 12);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_NEAR(rows.front().value, -0.45, 1e-9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].value, rows[i - 1].value - 1e-12);
    EXPECT_LE(rows[i].value, 0.05 + 1e-9);
  }
  // Still strictly quasi at every finite level checked.
  EXPECT_LT(rows.back().value, 0.05);
  EXPECT_GT(rows.back().value, 0.0);
}

TEST(Sweep, ConstantIsFlat) {
  for (const auto& row : qeo::dice::convergence_sweep(qeo::parse_polynomial("0.3", 6), 0, 6))
    EXPECT_NEAR(row.value, 0.3, 1e-12);
}

TEST(Sweep, RejectsBadRange) {
  EXPECT_THROW(qeo::dice::convergence_sweep(worked_g(), 1, 4), qeo::StructuralError);
  EXPECT_THROW(qeo::dice::convergence_sweep(worked_g(), 4, 3), qeo::StructuralError);
}

}  // namespace
