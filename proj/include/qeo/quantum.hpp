#ifndef QEO_QUANTUM_HPP
#define QEO_QUANTUM_HPP

// Density matrices read as quasi-moment matrices M = L(x x^dagger) of a hidden
// unit vector x, and the bosonic degree-extension hierarchy for entanglement
// witnesses.
//
// For a witness W on C^nx (x) C^ny and r extra bosons indistinguishable from
// x, level r minimizes Tr((I (x) W) M) over density matrices supported on
// Sym^(r+1)(C^nx) (x) C^ny. That minimum is the least eigenvalue of the
// operator compressed onto the symmetric subspace, so each level is a single
// small Hermitian eigenproblem of size C(nx + r, r + 1) * ny.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeo/errors.hpp"
#include "qeo/linalg.hpp"
#include "qeo/multi_index.hpp"
#include "qeo/random.hpp"

namespace qeo::quantum {

inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kProbabilityTol = 1e-12;
inline constexpr double kUnitTol = 1e-12;
inline constexpr double kOrthonormalTol = 1e-10;

// Hermitian, PSD and unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {
    const double tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) throw StructuralError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    const double lmin = min_eigenvalue(m_);
    if (lmin < -kPsdTol) throw StructuralError("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  std::size_t dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianMatrix m_;
};

struct WeightedState {
  double weight;
  std::vector<Complex> state;
};

class PureStateEnsemble {
 public:
  explicit PureStateEnsemble(std::vector<WeightedState> items) : items_(std::move(items)) {
    if (items_.empty()) throw StructuralError("PureStateEnsemble: empty");
    const std::size_t n = items_.front().state.size();
    double total = 0.0;
    for (const auto& it : items_) {
      if (it.state.size() != n) throw StructuralError("PureStateEnsemble: states of different dimension");
      if (!(it.weight >= 0.0)) throw StructuralError("PureStateEnsemble: negative weight");
      const double nrm = vector_norm(it.state);
      if (std::abs(nrm * nrm - 1.0) > kUnitTol) throw StructuralError("PureStateEnsemble: state is not a unit vector");
      total += it.weight;
    }
    if (std::abs(total - 1.0) > kUnitTol) throw StructuralError("PureStateEnsemble: weights do not sum to 1");
  }

  static PureStateEnsemble pure(std::vector<Complex> x) { return PureStateEnsemble({WeightedState{1.0, std::move(x)}}); }

  const std::vector<WeightedState>& items() const { return items_; }
  std::size_t dim() const { return items_.front().state.size(); }

 private:
  std::vector<WeightedState> items_;
};

// sum_i w_i x_i x_i^dagger
inline DensityMatrix moment_matrix(const PureStateEnsemble& e) {
  ComplexMatrix m(e.dim(), e.dim());
  for (const auto& it : e.items()) m += outer(it.state) * Complex(it.weight, 0.0);
  return DensityMatrix(m);
}

// L(g) = Tr(G M)
inline double expectation(const HermitianMatrix& g, const DensityMatrix& m) { return trace_product(g, m.hermitian()); }

// z_i^dagger M z_i for each member of an orthonormal basis.
inline std::vector<double> gleason_probabilities(const DensityMatrix& m, const std::vector<std::vector<Complex>>& basis) {
  const std::size_t n = m.dim();
  if (basis.size() != n) throw StructuralError("gleason_probabilities: basis does not span the space");
  for (std::size_t a = 0; a < n; ++a) {
    if (basis[a].size() != n) throw StructuralError("gleason_probabilities: basis vector of wrong length");
    for (std::size_t b = a; b < n; ++b) {
      Complex ip{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) ip += std::conj(basis[a][i]) * basis[b][i];
      const Complex expect = a == b ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(ip - expect) > kOrthonormalTol) throw StructuralError("gleason_probabilities: basis is not orthonormal");
    }
  }
  std::vector<double> probs(n);
  for (std::size_t a = 0; a < n; ++a) {
    probs[a] = quadratic_form(m.matrix(), basis[a]).real();
    if (probs[a] < -kProbabilityTol) throw NumericalError("gleason_probabilities: negative probability");
  }
  return probs;
}

inline HermitianMatrix product_observable(const HermitianMatrix& f, const HermitianMatrix& h) { return kron(f, h); }

struct SchmidtDiagnosis {
  bool pure = false;
  bool product = false;  // only meaningful for pure states; false otherwise
  double purity = 0.0;          // Tr(M^2)
  double reduced_purity = 0.0;  // Tr(rho_x^2)
};

inline SchmidtDiagnosis schmidt_diagnosis(const DensityMatrix& m, std::size_t nx, std::size_t ny) {
  if (m.dim() != nx * ny) throw StructuralError("schmidt_diagnosis: dimension is not nx * ny");
  SchmidtDiagnosis d;
  d.purity = trace_product(m.hermitian(), m.hermitian());
  d.pure = std::abs(d.purity - 1.0) <= 1e-9;
  const auto reduced = partial_trace(m.hermitian(), nx, ny, Subsystem::A);
  d.reduced_purity = trace_product(reduced, reduced);
  d.product = d.pure && std::abs(d.reduced_purity - 1.0) <= 1e-9;
  return d;
}

namespace detail {

inline std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < e; ++i) v *= base;
  return v;
}

// Digits of `flat` in base n, first factor most significant.
inline std::vector<int> digits(std::size_t flat, std::size_t n, std::size_t m) {
  std::vector<int> d(m);
  for (std::size_t i = m; i-- > 0;) {
    d[i] = static_cast<int>(flat % n);
    flat /= n;
  }
  return d;
}

inline std::size_t undigits(std::span<const int> d, std::size_t n) {
  std::size_t flat = 0;
  for (int x : d) flat = flat * n + static_cast<std::size_t>(x);
  return flat;
}

inline int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

inline MultiIndex occupation(std::span<const int> seq, std::size_t n) {
  std::vector<int> c(n, 0);
  for (int s : seq) ++c[static_cast<std::size_t>(s)];
  return MultiIndex(std::move(c));
}

}  // namespace detail

// (1/m!) sum_pi s(pi) P_pi on (C^n)^(x)m, with s = 1 (bosons, sign = +1) or
// the permutation parity (fermions, sign = -1).
inline HermitianMatrix symmetrizer(std::size_t n, std::size_t m, int sign) {
  if (n < 1 || m < 1) throw StructuralError("symmetrizer: n and m must be positive");
  if (sign != 1 && sign != -1) throw StructuralError("symmetrizer: sign must be +1 or -1");
  const std::size_t dim = detail::ipow(n, m);
  ComplexMatrix out(dim, dim);
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double factorial = 0.0;
  std::vector<int> permuted(m);
  do {
    factorial += 1.0;
    const double s = sign == 1 ? 1.0 : static_cast<double>(detail::permutation_sign(perm));
    for (std::size_t col = 0; col < dim; ++col) {
      const auto d = detail::digits(col, n, m);
      for (std::size_t i = 0; i < m; ++i) permuted[i] = d[static_cast<std::size_t>(perm[i])];
      out(detail::undigits(permuted, n), col) += s;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out *= Complex(1.0 / factorial, 0.0);
  return HermitianMatrix(out);
}

// rho = Pi rho Pi with Pi the bosonic symmetrizer.
inline bool bose_constraint_check(const DensityMatrix& rho, std::size_t n, std::size_t particles) {
  if (rho.dim() != detail::ipow(n, particles)) throw StructuralError("bose_constraint_check: dimension is not n^m");
  const auto pi = symmetrizer(n, particles, +1).matrix();
  const auto projected = pi * rho.matrix() * pi;
  return rho.matrix().max_abs_diff(projected) <= 1e-9;
}

// Orthonormal basis of Sym^m(C^n) labelled by occupation numbers. Column for
// label c holds 1/sqrt(multinomial(c)) on every ordered sequence with those
// counts.
struct SymmetricIsometry {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<MultiIndex> labels;
  ComplexMatrix matrix;  // n^m x labels.size()
};

inline SymmetricIsometry symmetric_isometry(std::size_t n, std::size_t m) {
  if (n < 1) throw StructuralError("symmetric_isometry: n must be positive");
  SymmetricIsometry iso;
  iso.n = n;
  iso.m = m;
  iso.labels = enumerate_multiindices(n, static_cast<int>(m));
  std::map<MultiIndex, std::size_t> column;
  for (std::size_t j = 0; j < iso.labels.size(); ++j) column.emplace(iso.labels[j], j);
  const std::size_t dim = detail::ipow(n, m);
  iso.matrix = ComplexMatrix(dim, iso.labels.size());
  for (std::size_t flat = 0; flat < dim; ++flat) {
    const auto seq = detail::digits(flat, n, m);
    const auto occ = detail::occupation(seq, n);
    iso.matrix(flat, column.at(occ)) = 1.0 / std::sqrt(static_cast<double>(multinomial(occ)));
  }
  return iso;
}

struct PowerSymmetryReport {
  std::size_t trials = 0;
  // compressed -> full: M = V C V^dagger
  double max_bose_residual = 0.0;    // max |M - Pi M Pi|
  double max_trace_residual = 0.0;   // max |Tr M - 1| over both directions
  double min_eigenvalue = 0.0;       // most negative eigenvalue seen in either direction
  // full -> compressed: C = V^dagger M V, then V C V^dagger
  double max_roundtrip_residual = 0.0;

  double worst() const {
    return std::max({max_bose_residual, max_trace_residual, -std::min(min_eigenvalue, 0.0), max_roundtrip_residual});
  }
};

// Checks both inclusions between bosonic density matrices (rho = Pi rho Pi)
// and compressed density matrices on the occupation basis.
inline PowerSymmetryReport power_symmetry_equivalence(std::size_t trials, std::size_t n, std::size_t m,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  const auto iso = symmetric_isometry(n, m);
  const auto& v = iso.matrix;
  const auto vh = v.adjoint();
  const auto pi = symmetrizer(n, m, +1).matrix();
  const std::size_t full = v.rows();
  const std::size_t small = v.cols();

  PowerSymmetryReport rep;
  rep.trials = trials;
  rep.min_eigenvalue = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = random_density_matrix(small, rng);
    const auto big = v * c * vh;
    rep.max_bose_residual = std::max(rep.max_bose_residual, big.max_abs_diff(pi * big * pi));
    rep.max_trace_residual = std::max(rep.max_trace_residual, std::abs(big.trace().real() - 1.0));
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eigenvalue(HermitianMatrix(big, 1e-10)));

    const auto rho = random_density_matrix(full, rng);
    auto projected = pi * rho * pi;
    projected *= Complex(1.0 / projected.trace().real(), 0.0);
    const auto compressed = vh * projected * v;
    rep.max_trace_residual = std::max(rep.max_trace_residual, std::abs(compressed.trace().real() - 1.0));
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eigenvalue(HermitianMatrix(compressed, 1e-10)));
    rep.max_roundtrip_residual = std::max(rep.max_roundtrip_residual, (v * compressed * vh).max_abs_diff(projected));
  }
  return rep;
}

// Hermitian W on C^nx (x) C^ny, x-index major.
class Witness {
 public:
  Witness(std::size_t nx, std::size_t ny, HermitianMatrix w) : nx_(nx), ny_(ny), w_(std::move(w)) {
    if (nx_ < 1 || ny_ < 1 || w_.dim() != nx_ * ny_) throw StructuralError("Witness: matrix is not (nx*ny) square");
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const HermitianMatrix& matrix() const { return w_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return w_(i, j); }

 private:
  std::size_t nx_;
  std::size_t ny_;
  HermitianMatrix w_;
};

// (x (x) y)^dagger W (x (x) y) for unit x, y.
inline double witness_polynomial(const Witness& w, std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != w.nx() || y.size() != w.ny()) throw StructuralError("witness_polynomial: vector length mismatch");
  const double nxv = vector_norm(x);
  const double nyv = vector_norm(y);
  if (std::abs(nxv - 1.0) > 1e-10 || std::abs(nyv - 1.0) > 1e-10) throw StructuralError("witness_polynomial: non-unit input");
  const auto xy = kron(x, y);
  const Complex v = quadratic_form(w.matrix().matrix(), xy);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
    throw NumericalError("witness_polynomial: complex value");
  }
  return v.real();
}

// Sampled upper bound on min over product states of the witness polynomial.
inline double product_state_minimum_estimate(const Witness& w, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = random_unit_vector(w.nx(), rng);
    const auto y = random_unit_vector(w.ny(), rng);
    best = std::min(best, witness_polynomial(w, x, y));
  }
  return best;
}

inline std::size_t compressed_dimension(const Witness& w, int r) {
  return static_cast<std::size_t>(count_multiindices(w.nx(), r + 1)) * w.ny();
}

// (V (x) I_ny)^dagger (I_{nx^r} (x) W) (V (x) I_ny) assembled directly on the
// occupation basis. Two labels a, b connect through W when removing one
// particle from mode u of a and one from mode v of b leaves the same
// configuration c; the overlap of the two symmetric states over the shared
// r-particle part is multinomial(c) / sqrt(multinomial(a) multinomial(b)).
inline HermitianMatrix compressed_hierarchy_operator(const Witness& w, int r) {
  if (r < 0) throw StructuralError("hierarchy: r must be nonnegative");
  const std::size_t nx = w.nx();
  const std::size_t ny = w.ny();
  const auto labels = enumerate_multiindices(nx, r + 1);
  std::map<MultiIndex, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);

  ComplexMatrix out(labels.size() * ny, labels.size() * ny);
  for (std::size_t ia = 0; ia < labels.size(); ++ia) {
    const auto& a = labels[ia];
    const double ma = static_cast<double>(multinomial(a));
    for (std::size_t u = 0; u < nx; ++u) {
      if (a[u] == 0) continue;
      const auto c = a.lowered(u);
      const double mc = static_cast<double>(multinomial(c));
      for (std::size_t v = 0; v < nx; ++v) {
        const auto b = c + MultiIndex::unit(nx, v);
        const std::size_t ib = index.at(b);
        const double scale = mc / std::sqrt(ma * static_cast<double>(multinomial(b)));
        for (std::size_t i = 0; i < ny; ++i)
          for (std::size_t j = 0; j < ny; ++j) out(ia * ny + i, ib * ny + j) += scale * w(u * ny + i, v * ny + j);
      }
    }
  }
  return HermitianMatrix(out, 1e-10);
}

// The same operator built the long way: the full (nx^(r+1) ny)-dimensional H
// with W on x-factor `w_factor` (0-based, default the last) and y, then
// compressed with V (x) I. Exponential in r; meant for cross-checks.
inline HermitianMatrix dense_hierarchy_operator(const Witness& w, int r, int w_factor = -1) {
  if (r < 0) throw StructuralError("hierarchy: r must be nonnegative");
  const std::size_t nx = w.nx();
  const std::size_t ny = w.ny();
  const std::size_t m = static_cast<std::size_t>(r) + 1;
  const std::size_t f = w_factor < 0 ? m - 1 : static_cast<std::size_t>(w_factor);
  if (f >= m) throw StructuralError("dense_hierarchy_operator: factor out of range");
  const std::size_t xdim = detail::ipow(nx, m);

  ComplexMatrix h(xdim * ny, xdim * ny);
  for (std::size_t s = 0; s < xdim; ++s) {
    const auto sd = detail::digits(s, nx, m);
    for (std::size_t v = 0; v < nx; ++v) {
      auto td = sd;
      td[f] = static_cast<int>(v);
      const std::size_t t = detail::undigits(td, nx);
      const auto u = static_cast<std::size_t>(sd[f]);
      for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) h(s * ny + i, t * ny + j) = w(u * ny + i, v * ny + j);
    }
  }
  const auto iso = symmetric_isometry(nx, m);
  const auto u = kron(iso.matrix, ComplexMatrix::identity(ny));
  return HermitianMatrix(u.adjoint() * h * u, 1e-10);
}

inline double hierarchy_value(const Witness& w, int r) { return min_eigenvalue(compressed_hierarchy_operator(w, r)); }

struct HierarchyRow {
  int r;
  double value;
  std::size_t compressed_dim;
};

inline std::vector<HierarchyRow> hierarchy_sweep(const Witness& w, int r_min, int r_max) {
  if (r_min < 0 || r_max < r_min) throw StructuralError("hierarchy_sweep: need 0 <= r_min <= r_max");
  std::vector<HierarchyRow> rows;
  for (int r = r_min; r <= r_max; ++r) {
    const auto op = compressed_hierarchy_operator(w, r);
    rows.push_back({r, min_eigenvalue(op), op.dim()});
  }
  return rows;
}

inline std::vector<HierarchyRow> hierarchy_sweep(const Witness& w, int r_max) { return hierarchy_sweep(w, 0, r_max); }

// Worked two-qubit witness: positive (>= 0.25) on product states, least
// eigenvalue -0.75 attained by (|00> + |11>)/sqrt(2).
inline Witness reference_witness() {
  return Witness(2, 2, HermitianMatrix(ComplexMatrix::from_real({{0.25, 0.0, 0.0, -1.0},
                                                                   {0.0, 2.25, -1.0, 0.0},
                                                                   {0.0, -1.0, 2.25, 0.0},
                                                                   {-1.0, 0.0, 0.0, 0.25}})));
}

inline std::vector<Complex> phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, 0.0, 0.0, s};
}

// (|00> + |11>)(<00| + <11|) / 2
inline DensityMatrix maximally_entangled_state() { return moment_matrix(PureStateEnsemble::pure(phi_plus())); }

// (|01> + |10>)(<01| + <10|) / 2, entered entrywise.
inline DensityMatrix bell_moment_matrix() {
  return DensityMatrix(ComplexMatrix::from_real({{0.0, 0.0, 0.0, 0.0},
                                                 {0.0, 0.5, 0.5, 0.0},
                                                 {0.0, 0.5, 0.5, 0.0},
                                                 {0.0, 0.0, 0.0, 0.0}}));
}

// Phi+, Phi-, Psi+, Psi-
inline std::vector<std::vector<Complex>> bell_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, 0.0, 0.0, s}, {s, 0.0, 0.0, -s}, {0.0, s, s, 0.0}, {0.0, s, -s, 0.0}};
}

inline std::vector<std::vector<Complex>> computational_basis(std::size_t n) {
  std::vector<std::vector<Complex>> b(n, std::vector<Complex>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) b[i][i] = 1.0;
  return b;
}

}  // namespace qeo::quantum

#endif  // QEO_QUANTUM_HPP
