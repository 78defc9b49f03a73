#ifndef QEO_SIMPLEX_POLY_HPP
#define QEO_SIMPLEX_POLY_HPP

// Real polynomials over the probability simplex. A general Polynomial may mix
// degrees; a SimplexPolynomial is its homogeneous representative of a fixed
// degree r, obtained by multiplying each term by a power of (th_1 + ... + th_k).
// On the simplex both agree, and the homogeneous coefficients are the
// Bernstein-cone certificate: all nonnegative means the polynomial is
// nonnegative on the simplex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeo/errors.hpp"
#include "qeo/multi_index.hpp"

namespace qeo {

inline constexpr double kSimplexSumTol = 1e-12;

class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw StructuralError("SimplexPoint: no coordinates");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw StructuralError("SimplexPoint: negative or NaN coordinate");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTol) {
      throw StructuralError("SimplexPoint: coordinates sum to " + std::to_string(sum));
    }
  }

  static SimplexPoint vertex(std::size_t k, std::size_t i) {
    std::vector<double> p(k, 0.0);
    p.at(i) = 1.0;
    return SimplexPoint(std::move(p));
  }

  static SimplexPoint uniform(std::size_t k) {
    return SimplexPoint(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  // n / n.degree(); exact rational grid point.
  static SimplexPoint grid(const MultiIndex& n) {
    std::vector<double> p(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) p[i] = static_cast<double>(n[i]) / n.degree();
    return SimplexPoint(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// theta^n
inline double monomial_value(const MultiIndex& n, std::span<const double> theta) {
  double v = 1.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (int e = 0; e < n[i]; ++e) v *= theta[i];
  }
  return v;
}

// Polynomial in k simplex coordinates with terms of any degree.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double>;

  explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
    if (num_vars_ == 0) throw StructuralError("Polynomial: need at least one variable");
  }

  static Polynomial constant(std::size_t num_vars, double c) {
    Polynomial p(num_vars);
    p.add_term(MultiIndex::zero(num_vars), c);
    return p;
  }

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }

  Polynomial& add_term(const MultiIndex& exponent, double coeff) {
    if (exponent.size() != num_vars_) throw StructuralError("Polynomial: exponent length mismatch");
    terms_[exponent] += coeff;
    return *this;
  }

  double coefficient(const MultiIndex& exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0.0 : it->second;
  }

  // Largest degree among terms with nonzero coefficient; 0 for the zero polynomial.
  int degree() const {
    int d = 0;
    for (const auto& [n, c] : terms_) {
      if (c != 0.0) d = std::max(d, n.degree());
    }
    return d;
  }

  Polynomial operator-(double c) const {
    Polynomial p = *this;
    p.add_term(MultiIndex::zero(num_vars_), -c);
    return p;
  }

  double evaluate(std::span<const double> theta) const {
    if (theta.size() != num_vars_) throw StructuralError("Polynomial: point dimension mismatch");
    double v = 0.0;
    for (const auto& [n, c] : terms_) v += c * monomial_value(n, theta);
    return v;
  }

  double evaluate(const SimplexPoint& x) const { return evaluate(x.probs()); }

 private:
  std::size_t num_vars_;
  Terms terms_;
};

// Homogeneous polynomial of degree r over k simplex coordinates.
class SimplexPolynomial {
 public:
  using Coeffs = std::map<MultiIndex, double>;

  SimplexPolynomial(std::size_t num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars_ == 0) throw StructuralError("SimplexPolynomial: need at least one variable");
    if (degree_ < 0) throw StructuralError("SimplexPolynomial: negative degree");
  }

  std::size_t num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const Coeffs& coeffs() const { return coeffs_; }

  void add(const MultiIndex& n, double c) {
    if (n.size() != num_vars_ || n.degree() != degree_) {
      throw StructuralError("SimplexPolynomial: key " + n.to_string() + " is not of degree " +
                            std::to_string(degree_));
    }
    coeffs_[n] += c;
  }

  double coefficient(const MultiIndex& n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  Polynomial to_polynomial() const {
    Polynomial p(num_vars_);
    for (const auto& [n, c] : coeffs_) p.add_term(n, c);
    return p;
  }

 private:
  std::size_t num_vars_;
  int degree_;
  Coeffs coeffs_;
};

// Multiply each term of degree d by (sum theta)^(r - d), expanded with the
// multinomial theorem.
inline SimplexPolynomial homogenize(const Polynomial& g, int r) {
  if (r < g.degree()) {
    throw StructuralError("homogenize: target degree " + std::to_string(r) +
                          " below polynomial degree " + std::to_string(g.degree()));
  }
  const std::size_t k = g.num_vars();
  SimplexPolynomial out(k, r);
  std::map<int, std::vector<MultiIndex>> padding;
  for (const auto& [n, c] : g.terms()) {
    if (c == 0.0) continue;
    const int extra = r - n.degree();
    auto [it, fresh] = padding.try_emplace(extra);
    if (fresh) it->second = enumerate_multiindices(k, extra);
    for (const auto& m : it->second) out.add(n + m, c * static_cast<double>(multinomial(m)));
  }
  return out;
}

inline SimplexPolynomial homogenize(const SimplexPolynomial& p, int r) {
  return homogenize(p.to_polynomial(), r);
}

inline double evaluate(const SimplexPolynomial& p, const SimplexPoint& x) {
  if (x.size() != p.num_vars()) throw StructuralError("evaluate: point dimension mismatch");
  double v = 0.0;
  for (const auto& [n, c] : p.coeffs()) v += c * monomial_value(n, x.probs());
  return v;
}

// Coefficients over every degree-r monomial, zeros included, so that a sign
// check over the result decides Bernstein-cone membership.
inline std::map<MultiIndex, double> bernstein_coefficients(const SimplexPolynomial& p) {
  std::map<MultiIndex, double> out;
  for (const auto& n : enumerate_multiindices(p.num_vars(), p.degree())) out.emplace(n, p.coefficient(n));
  return out;
}

inline bool in_bernstein_cone(const SimplexPolynomial& p, double tol = 0.0) {
  for (const auto& [n, c] : bernstein_coefficients(p)) {
    if (c < -tol) return false;
  }
  return true;
}

}  // namespace qeo

#endif  // QEO_SIMPLEX_POLY_HPP
