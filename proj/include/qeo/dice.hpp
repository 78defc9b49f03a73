#ifndef QEO_DICE_HPP
#define QEO_DICE_HPP

// Finitely exchangeable rolls of a k-sided die.
//
// A probability over ordered outcome tuples of length r is exchangeable when
// it only depends on the face counts. Mixtures of i.i.d. rolls (nonnegative
// measures over the simplex) produce exchangeable tables; the converse needs
// signed measures. On the dual side, a quasi-expectation of degree r is a
// linear functional on degree-r polynomials that is nonnegative on the
// Bernstein cone, and its lower prevision of g is the largest c with
// g - c in that cone.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeo/errors.hpp"
#include "qeo/lp.hpp"
#include "qeo/multi_index.hpp"
#include "qeo/simplex_poly.hpp"

namespace qeo::dice {

inline constexpr double kProbabilitySumTol = 1e-12;
inline constexpr double kExchangeTol = 1e-12;
inline constexpr double kMeasureMassTol = 1e-9;

// Dense table over all k^r ordered tuples. Faces are 0-based internally; the
// first roll is the most significant digit of the flat index.
struct ProbabilityTable {
  std::size_t k = 0;
  int r = 0;
  std::vector<double> values;

  ProbabilityTable() = default;
  ProbabilityTable(std::size_t faces, int rolls) : k(faces), r(rolls), values(size_for(faces, rolls), 0.0) {}

  static std::size_t size_for(std::size_t faces, int rolls) {
    std::size_t n = 1;
    for (int i = 0; i < rolls; ++i) n *= faces;
    return n;
  }

  std::vector<int> tuple(std::size_t flat) const {
    std::vector<int> t(static_cast<std::size_t>(r));
    for (int i = r - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(flat % k);
      flat /= k;
    }
    return t;
  }

  std::size_t index(std::span<const int> t) const {
    if (t.size() != static_cast<std::size_t>(r)) throw StructuralError("ProbabilityTable: tuple length mismatch");
    std::size_t flat = 0;
    for (int face : t) {
      if (face < 0 || static_cast<std::size_t>(face) >= k) throw StructuralError("ProbabilityTable: face out of range");
      flat = flat * k + static_cast<std::size_t>(face);
    }
    return flat;
  }

  double at(std::span<const int> t) const { return values[index(t)]; }
  double& at(std::span<const int> t) { return values[index(t)]; }

  MultiIndex counts(std::size_t flat) const {
    std::vector<int> c(k, 0);
    for (int face : tuple(flat)) ++c[static_cast<std::size_t>(face)];
    return MultiIndex(std::move(c));
  }
};

// Raised by check_exchangeable; carries the offending tuple pair when the
// failure is a permutation violation.
class ExchangeabilityError : public StructuralError {
 public:
  enum class Kind { NotNormalized, Negative, PermutationViolation };

  ExchangeabilityError(Kind kind, const std::string& what, std::vector<int> a = {}, std::vector<int> b = {})
      : StructuralError(what), kind_(kind), first_(std::move(a)), second_(std::move(b)) {}

  Kind kind() const { return kind_; }
  const std::vector<int>& first() const { return first_; }
  const std::vector<int>& second() const { return second_; }

 private:
  Kind kind_;
  std::vector<int> first_;
  std::vector<int> second_;
};

inline std::string tuple_label(std::span<const int> t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i] + 1);
  }
  return s;
}

class ExchangeableProbability;
inline ExchangeableProbability check_exchangeable(ProbabilityTable table);

// A table that passed check_exchangeable.
class ExchangeableProbability {
 public:
  const ProbabilityTable& table() const { return table_; }
  std::size_t k() const { return table_.k; }
  int r() const { return table_.r; }

 private:
  explicit ExchangeableProbability(ProbabilityTable t) : table_(std::move(t)) {}
  friend ExchangeableProbability check_exchangeable(ProbabilityTable table);

  ProbabilityTable table_;
};

inline ExchangeableProbability check_exchangeable(ProbabilityTable table) {
  using Kind = ExchangeabilityError::Kind;
  if (table.k == 0 || table.r < 0 || table.values.size() != ProbabilityTable::size_for(table.k, table.r)) {
    throw StructuralError("check_exchangeable: table shape does not match k^r");
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < table.values.size(); ++f) {
    if (!(table.values[f] >= 0.0)) {
      throw ExchangeabilityError(Kind::Negative, "check_exchangeable: negative entry at (" +
                                                     tuple_label(table.tuple(f)) + ")", table.tuple(f));
    }
    sum += table.values[f];
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTol) {
    throw ExchangeabilityError(Kind::NotNormalized, "check_exchangeable: entries sum to " + std::to_string(sum));
  }
  // Every tuple must match its sorted rearrangement.
  for (std::size_t f = 0; f < table.values.size(); ++f) {
    auto t = table.tuple(f);
    auto s = t;
    std::sort(s.begin(), s.end());
    if (std::abs(table.values[f] - table.at(s)) > kExchangeTol) {
      throw ExchangeabilityError(Kind::PermutationViolation,
                                 "check_exchangeable: P(" + tuple_label(s) + ") != P(" + tuple_label(t) + ")", s, t);
    }
  }
  return ExchangeableProbability(std::move(table));
}

// Count-class probabilities: multinomial(n) times the common tuple probability.
inline std::map<MultiIndex, double> exchangeable_to_counts(const ExchangeableProbability& p) {
  std::map<MultiIndex, double> out;
  for (const auto& n : enumerate_multiindices(p.k(), p.r())) out.emplace(n, 0.0);
  const auto& t = p.table();
  for (std::size_t f = 0; f < t.values.size(); ++f) out[t.counts(f)] += t.values[f];
  return out;
}

struct Atom {
  double weight;
  SimplexPoint point;
};

// Finite signed measure on the simplex with unit total mass.
class SignedMeasure {
 public:
  explicit SignedMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw StructuralError("SignedMeasure: no atoms");
    const std::size_t k = atoms_.front().point.size();
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (a.point.size() != k) throw StructuralError("SignedMeasure: atoms live on different simplices");
      if (!std::isfinite(a.weight)) throw StructuralError("SignedMeasure: non-finite weight");
      total += a.weight;
    }
    if (std::abs(total - 1.0) > kMeasureMassTol) {
      throw StructuralError("SignedMeasure: total weight " + std::to_string(total) + " is not 1");
    }
  }

  static SignedMeasure dirac(SimplexPoint x) { return SignedMeasure({Atom{1.0, std::move(x)}}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t k() const { return atoms_.front().point.size(); }

  double total_weight() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
  }
  double total_variation() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += std::abs(a.weight);
    return s;
  }
  bool has_negative_weight(double tol = 0.0) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return a.weight < -tol; });
  }

 private:
  std::vector<Atom> atoms_;
};

namespace detail {

inline ProbabilityTable mixture_table(const SignedMeasure& nu, std::size_t k, int r) {
  if (nu.k() != k) throw StructuralError("mixture: measure lives on a simplex of different dimension");
  ProbabilityTable table(k, r);
  for (std::size_t f = 0; f < table.values.size(); ++f) {
    const auto t = table.tuple(f);
    double v = 0.0;
    for (const auto& atom : nu.atoms()) {
      double prod = atom.weight;
      for (int face : t) prod *= atom.point[static_cast<std::size_t>(face)];
      v += prod;
    }
    table.values[f] = v;
  }
  return table;
}

}  // namespace detail

// de Finetti forward map for a nonnegative mixing measure.
inline ExchangeableProbability mixture_probability(const SignedMeasure& q, std::size_t k, int r) {
  if (q.has_negative_weight()) throw StructuralError("mixture_probability: negative weight; use signed_mixture_probability");
  auto table = detail::mixture_table(q, k, r);
  // Rounding can push the total a few ulps off 1.
  double sum = 0.0;
  for (double v : table.values) sum += v;
  for (double& v : table.values) v /= sum;
  return check_exchangeable(std::move(table));
}

struct SignedTable {
  ProbabilityTable table;
  bool valid = false;       // nonnegative and normalized
  double min_entry = 0.0;
  double total = 0.0;
  std::string violation;    // empty when valid
};

inline SignedTable signed_mixture_probability(const SignedMeasure& nu, std::size_t k, int r) {
  SignedTable out;
  out.table = detail::mixture_table(nu, k, r);
  out.min_entry = *std::min_element(out.table.values.begin(), out.table.values.end());
  for (double v : out.table.values) out.total += v;
  out.valid = true;
  if (out.min_entry < -kProbabilitySumTol) {
    out.valid = false;
    const auto it = std::min_element(out.table.values.begin(), out.table.values.end());
    out.violation = "negative entry " + std::to_string(out.min_entry) + " at (" +
                    tuple_label(out.table.tuple(static_cast<std::size_t>(it - out.table.values.begin()))) + ")";
  } else if (std::abs(out.total - 1.0) > kProbabilitySumTol) {
    out.valid = false;
    out.violation = "entries sum to " + std::to_string(out.total);
  }
  return out;
}

struct SignedRepresentation {
  lp::Status status = lp::Status::NumericalFailure;
  std::optional<SignedMeasure> measure;
  std::size_t grid_resolution = 0;
  std::string message;

  bool found() const { return measure.has_value(); }
};

// Searches for a measure on the grid {n / grid_resolution} reproducing every
// count-class probability of p. Signed weights are split into positive and
// negative parts and the total variation is minimized; with
// `nonnegative_only` the weights are restricted to be >= 0 and the LP is a
// pure feasibility problem.
inline SignedRepresentation represent_signed(const ExchangeableProbability& p, int grid_resolution,
                                             bool nonnegative_only = false) {
  if (grid_resolution < 1) throw StructuralError("represent_signed: grid resolution must be positive");
  const std::size_t k = p.k();
  const auto classes = exchangeable_to_counts(p);
  const auto grid = enumerate_multiindices(k, grid_resolution);
  std::vector<SimplexPoint> points;
  points.reserve(grid.size());
  for (const auto& g : grid) points.push_back(SimplexPoint::grid(g));

  const std::size_t atoms = points.size();
  const std::size_t cols = nonnegative_only ? atoms : 2 * atoms;
  lp::LinearProgram prog;
  prog.objective.assign(cols, nonnegative_only ? 0.0 : -1.0);

  for (const auto& [n, prob] : classes) {
    std::vector<double> row(cols, 0.0);
    const double mult = static_cast<double>(multinomial(n));
    for (std::size_t a = 0; a < atoms; ++a) {
      const double v = mult * monomial_value(n, points[a].probs());
      row[a] = v;
      if (!nonnegative_only) row[atoms + a] = -v;
    }
    prog.add_row(std::move(row), prob);
  }
  {
    std::vector<double> row(cols, 1.0);
    if (!nonnegative_only) std::fill(row.begin() + static_cast<std::ptrdiff_t>(atoms), row.end(), -1.0);
    prog.add_row(std::move(row), 1.0);
  }

  const auto sol = lp::solve(prog);
  SignedRepresentation out;
  out.status = sol.status;
  out.grid_resolution = static_cast<std::size_t>(grid_resolution);
  out.message = sol.message;
  if (!sol.optimal()) return out;

  std::vector<Atom> support;
  for (std::size_t a = 0; a < atoms; ++a) {
    const double w = nonnegative_only ? sol.primal[a] : sol.primal[a] - sol.primal[atoms + a];
    if (std::abs(w) > 1e-13) support.push_back(Atom{w, points[a]});
  }
  out.measure.emplace(std::move(support));
  return out;
}

// Values of a degree-r quasi-expectation on the monomials theta^n.
class QuasiMomentVector {
 public:
  QuasiMomentVector(std::size_t k, int r) : k_(k), r_(r) {
    for (const auto& n : enumerate_multiindices(k, r)) values_.emplace(n, 0.0);
  }

  std::size_t k() const { return k_; }
  int r() const { return r_; }
  const std::map<MultiIndex, double>& values() const { return values_; }

  void set(const MultiIndex& n, double v) {
    auto it = values_.find(n);
    if (it == values_.end()) throw StructuralError("QuasiMomentVector: " + n.to_string() + " is not a degree-r index");
    it->second = v;
  }
  double operator[](const MultiIndex& n) const { return values_.at(n); }

  // L(1) = L((sum theta)^r) = sum multinomial(n) L(theta^n).
  double normalization() const {
    double s = 0.0;
    for (const auto& [n, v] : values_) s += static_cast<double>(multinomial(n)) * v;
    return s;
  }

  // Smallest value; the functional is nonnegative on the Bernstein cone iff
  // this is >= 0.
  double min_value() const {
    double m = values_.begin()->second;
    for (const auto& [n, v] : values_) m = std::min(m, v);
    return m;
  }

  // L(p) for p of degree <= r (lifted to degree r first).
  double apply(const Polynomial& p) const {
    const auto h = homogenize(p, r_);
    double s = 0.0;
    for (const auto& [n, c] : h.coeffs()) s += c * values_.at(n);
    return s;
  }

 private:
  std::size_t k_;
  int r_;
  std::map<MultiIndex, double> values_;
};

struct LowerPrevision {
  double value = 0.0;
  QuasiMomentVector dual;
  lp::LpSolution solution;
};

// max c s.t. homogenize(g - c, r) has nonnegative coefficients.
//
// Solved in moment form: with z_n = multinomial(n) * L(theta^n) >= 0 the
// normalization reads sum z_n = 1 and L(g) = sum (a_n / multinomial(n)) z_n,
// a_n the homogeneous coefficients of g. Minimizing L(g) over this simplex is
// the LP dual of the cone program, so both optima agree, and the minimizer is
// the extremal quasi-expectation. The row's dual multiplier is -c.
inline LowerPrevision lower_prevision(const Polynomial& g, int r) {
  if (g.degree() > r) {
    throw StructuralError("lower_prevision: polynomial degree " + std::to_string(g.degree()) +
                          " exceeds level " + std::to_string(r));
  }
  const std::size_t k = g.num_vars();
  const auto h = homogenize(g, r);
  const auto index = enumerate_multiindices(k, r);

  lp::LinearProgram prog;
  prog.objective.reserve(index.size());
  std::vector<double> mults;
  mults.reserve(index.size());
  for (const auto& n : index) {
    const double m = static_cast<double>(multinomial(n));
    mults.push_back(m);
    prog.objective.push_back(-h.coefficient(n) / m);
  }
  prog.add_row(std::vector<double>(index.size(), 1.0), 1.0);

  auto sol = lp::solve(prog);
  if (!sol.optimal()) {
    throw NumericalError(std::string("lower_prevision: LP ended ") + lp::to_string(sol.status) + ": " + sol.message);
  }
  QuasiMomentVector dual(k, r);
  for (std::size_t i = 0; i < index.size(); ++i) dual.set(index[i], sol.primal[i] / mults[i]);
  LowerPrevision out{-sol.dual[0], std::move(dual), std::move(sol)};
  return out;
}

// The cone program itself: variables (c free, u_n >= 0) with one equality
// per degree-r monomial, coeff_n(g) - c * multinomial(n) - u_n = 0. Dense in
// the number of monomials, so only sensible for small k and r.
inline lp::LpSolution lower_prevision_cone_lp(const Polynomial& g, int r) {
  const auto h = homogenize(g, r);
  const auto index = enumerate_multiindices(g.num_vars(), r);
  const std::size_t m = index.size();
  lp::LinearProgram prog;
  prog.objective.assign(m + 1, 0.0);
  prog.objective[0] = 1.0;
  prog.bounds.assign(m + 1, lp::Bound::NonNegative);
  prog.bounds[0] = lp::Bound::Free;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(m + 1, 0.0);
    row[0] = static_cast<double>(multinomial(index[i]));
    row[i + 1] = 1.0;
    prog.add_row(std::move(row), h.coefficient(index[i]));
  }
  return lp::solve(prog);
}

struct SweepRow {
  int r;
  double value;
};

inline std::vector<SweepRow> convergence_sweep(const Polynomial& g, int r_min, int r_max) {
  if (r_min < g.degree()) throw StructuralError("convergence_sweep: r_min below polynomial degree");
  if (r_max < r_min) throw StructuralError("convergence_sweep: r_max < r_min");
  std::vector<SweepRow> rows;
  for (int r = r_min; r <= r_max; ++r) rows.push_back({r, lower_prevision(g, r).value});
  return rows;
}

// P(i, j) = 1/(k(k-1)) for i != j and 0 on the diagonal: two draws without
// replacement. Exchangeable but not a mixture of i.i.d. rolls.
inline ProbabilityTable pair_exclusion_table(std::size_t k = 6) {
  ProbabilityTable t(k, 2);
  const double p = 1.0 / static_cast<double>(k * (k - 1));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const int tup[2] = {static_cast<int>(i), static_cast<int>(j)};
      t.at(tup) = i == j ? 0.0 : p;
    }
  return t;
}

inline constexpr const char* kWorkedExamplePolynomial = "th1^2 - th1*th2 + th2^2 + 0.05";

}  // namespace qeo::dice

#endif  // QEO_DICE_HPP
