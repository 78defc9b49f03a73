#ifndef QEO_CLI_HPP
#define QEO_CLI_HPP

// Batch driver behind the qeo_cli executable.
//
//   dice-example     lower prevision of g at one level, with its extremal dual (JSON)
//   dice-sweep       lower previsions for r = rmin..rmax (CSV "r,value")
//   signed-measure   grid signed-measure representation of a table (JSON)
//   quantum-witness  spectrum and extremal state of a witness (JSON)
//   quantum-sweep    bosonic hierarchy for r = rmin..rmax (CSV "r,value,compressed_dim")
//   gleason          outcome probabilities in fixed and random bases (JSON)
//
// Exit status: 0 success, 2 bad input, 3 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qeo/dice.hpp"
#include "qeo/errors.hpp"
#include "qeo/io.hpp"
#include "qeo/linalg.hpp"
#include "qeo/poly_parse.hpp"
#include "qeo/quantum.hpp"
#include "qeo/random.hpp"

namespace qeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSolver = 3;

struct RunConfig {
  std::string command;
  std::optional<std::string> polynomial;  // --g
  std::optional<std::string> witness_path;
  std::optional<std::string> table_path;
  std::optional<int> r_min;
  std::optional<int> r_max;
  int grid = 6;
  std::size_t k = 6;
  std::string out_path;  // empty: write to the given stream
  std::uint64_t seed = 1;
};

namespace detail {

using nlohmann::json;

inline Polynomial polynomial_of(const RunConfig& cfg) {
  return parse_polynomial(cfg.polynomial.value_or(dice::kWorkedExamplePolynomial), cfg.k);
}

inline quantum::Witness witness_of(const RunConfig& cfg) {
  if (!cfg.witness_path) return quantum::reference_witness();
  const auto doc = io::parse_json(io::read_file(*cfg.witness_path));
  const auto m = io::matrix_from_json(doc);
  std::size_t nx = 0;
  std::size_t ny = 0;
  if (doc.contains("nx") && doc.contains("ny")) {
    nx = doc.at("nx").get<std::size_t>();
    ny = doc.at("ny").get<std::size_t>();
  } else {
    nx = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
    ny = nx;
  }
  if (nx * ny != m.rows()) throw ParseError("witness: dim is not nx*ny; add \"nx\" and \"ny\" fields");
  return quantum::Witness(nx, ny, HermitianMatrix(m));
}

inline std::string index_key(const MultiIndex& n) {
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(n[i]);
  }
  return s;
}

inline json point_json(const SimplexPoint& p) {
  json a = json::array();
  for (double v : p.probs()) a.push_back(v);
  return a;
}

inline void require_range(int lo, int hi) {
  if (lo > hi) throw ParseError("--rmin exceeds --rmax");
  if (lo < 0) throw ParseError("--rmin must be nonnegative");
}

inline std::string dice_example(const RunConfig& cfg) {
  const auto g = polynomial_of(cfg);
  const int r = cfg.r_min.value_or(std::max(g.degree(), 0));
  const auto lp = dice::lower_prevision(g, r);

  json dual = json::object();
  for (const auto& [n, v] : lp.dual.values()) {
    if (v != 0.0) dual[index_key(n)] = v;
  }
  json doc;
  doc["command"] = "dice-example";
  doc["polynomial"] = cfg.polynomial.value_or(dice::kWorkedExamplePolynomial);
  doc["k"] = cfg.k;
  doc["r"] = r;
  doc["value"] = lp.value;
  doc["dual"] = std::move(dual);
  doc["dual_normalization"] = lp.dual.normalization();
  doc["dual_min_value"] = lp.dual.min_value();
  doc["dual_attained"] = lp.dual.apply(g);
  doc["certificate_in_cone"] = in_bernstein_cone(homogenize(g - lp.value, r), 1e-9);
  doc["lp_pivots"] = lp.solution.pivots;
  return doc.dump(2) + "\n";
}

inline std::string dice_sweep(const RunConfig& cfg) {
  const auto g = polynomial_of(cfg);
  const int lo = cfg.r_min.value_or(g.degree());
  const int hi = cfg.r_max.value_or(std::max(lo, 12));
  require_range(lo, hi);
  if (lo < g.degree()) throw ParseError("--rmin below the degree of g");
  std::ostringstream os;
  os << "r,value\n";
  for (const auto& row : dice::convergence_sweep(g, lo, hi)) os << row.r << "," << io::format_number(row.value) << "\n";
  return os.str();
}

inline std::string signed_measure(const RunConfig& cfg) {
  const auto table = cfg.table_path ? io::table_from_json(io::parse_json(io::read_file(*cfg.table_path)))
                                    : dice::pair_exclusion_table(cfg.k);
  const auto p = dice::check_exchangeable(table);
  const auto rep = dice::represent_signed(p, cfg.grid);
  const auto classical = dice::represent_signed(p, cfg.grid, /*nonnegative_only=*/true);

  json doc;
  doc["command"] = "signed-measure";
  doc["k"] = p.k();
  doc["r"] = p.r();
  doc["grid"] = cfg.grid;
  doc["status"] = lp::to_string(rep.status);
  doc["nonnegative_status"] = lp::to_string(classical.status);
  if (rep.status != lp::Status::Optimal && rep.status != lp::Status::Infeasible) {
    throw NumericalError("signed-measure: " + rep.message);
  }
  if (rep.found()) {
    const auto& nu = *rep.measure;
    json atoms = json::array();
    std::size_t negatives = 0;
    for (const auto& a : nu.atoms()) {
      atoms.push_back(json{{"weight", a.weight}, {"point", point_json(a.point)}});
      if (a.weight < 0.0) ++negatives;
    }
    const auto back = dice::signed_mixture_probability(nu, p.k(), p.r());
    double err = 0.0;
    for (std::size_t f = 0; f < back.table.values.size(); ++f) {
      err = std::max(err, std::abs(back.table.values[f] - p.table().values[f]));
    }
    doc["atoms"] = std::move(atoms);
    doc["negative_weights"] = negatives;
    doc["total_weight"] = nu.total_weight();
    doc["total_variation"] = nu.total_variation();
    doc["roundtrip_max_error"] = err;
  }
  return doc.dump(2) + "\n";
}

inline std::string quantum_witness(const RunConfig& cfg) {
  const auto w = witness_of(cfg);
  const auto eig = hermitian_eigen(w.matrix());
  const auto rho = quantum::moment_matrix(quantum::PureStateEnsemble::pure(eig.vector(0)));
  const auto diag = quantum::schmidt_diagnosis(rho, w.nx(), w.ny());

  json values = json::array();
  for (double v : eig.values) values.push_back(v);
  json doc;
  doc["command"] = "quantum-witness";
  doc["nx"] = w.nx();
  doc["ny"] = w.ny();
  doc["eigenvalues"] = std::move(values);
  doc["min_eigenvalue"] = eig.values.front();
  doc["extremal_state_expectation"] = quantum::expectation(w.matrix(), rho);
  doc["extremal_state"] = io::matrix_to_json(rho.matrix());
  doc["extremal_state_pure"] = diag.pure;
  doc["extremal_state_product"] = diag.product;
  doc["product_state_minimum_estimate"] = quantum::product_state_minimum_estimate(w, 100000, cfg.seed);
  return doc.dump(2) + "\n";
}

inline std::string quantum_sweep(const RunConfig& cfg) {
  const auto w = witness_of(cfg);
  const int lo = cfg.r_min.value_or(0);
  const int hi = cfg.r_max.value_or(5);
  require_range(lo, hi);
  std::ostringstream os;
  os << "r,value,compressed_dim\n";
  for (const auto& row : quantum::hierarchy_sweep(w, lo, hi)) {
    os << row.r << "," << io::format_number(row.value) << "," << row.compressed_dim << "\n";
  }
  return os.str();
}

inline std::string gleason(const RunConfig& cfg) {
  const auto rho = quantum::maximally_entangled_state();
  const auto probs_json = [](const std::vector<double>& p) {
    json a = json::array();
    double s = 0.0;
    for (double v : p) {
      a.push_back(v);
      s += v;
    }
    return json{{"probabilities", std::move(a)}, {"sum", s}};
  };
  Rng rng(cfg.seed);
  const auto random_rho = quantum::DensityMatrix(random_density_matrix(4, rng));
  const auto random_basis = random_orthonormal_basis(4, rng);

  json doc;
  doc["command"] = "gleason";
  doc["seed"] = cfg.seed;
  doc["entangled_computational"] = probs_json(quantum::gleason_probabilities(rho, quantum::computational_basis(4)));
  doc["entangled_bell"] = probs_json(quantum::gleason_probabilities(rho, quantum::bell_basis()));
  doc["random_state_random_basis"] = probs_json(quantum::gleason_probabilities(random_rho, random_basis));
  return doc.dump(2) + "\n";
}

inline std::string dispatch(const RunConfig& cfg) {
  if (cfg.k < 1) throw ParseError("--k must be positive");
  if (cfg.command == "dice-example") return dice_example(cfg);
  if (cfg.command == "dice-sweep") return dice_sweep(cfg);
  if (cfg.command == "signed-measure") return signed_measure(cfg);
  if (cfg.command == "quantum-witness") return quantum_witness(cfg);
  if (cfg.command == "quantum-sweep") return quantum_sweep(cfg);
  if (cfg.command == "gleason") return gleason(cfg);
  throw ParseError("unknown command '" + cfg.command + "'");
}

}  // namespace detail

// Runs one command. Output goes to cfg.out_path when set, otherwise to `out`;
// a one-line diagnostic goes to `err` on failure.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = detail::dispatch(cfg);
  } catch (const ParseError& e) {
    err << "qeo_cli: " << e.what() << "\n";
    return kExitParse;
  } catch (const StructuralError& e) {
    err << "qeo_cli: " << e.what() << "\n";
    return kExitParse;
  } catch (const NumericalError& e) {
    err << "qeo_cli: " << e.what() << "\n";
    return kExitSolver;
  }
  if (cfg.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f || !(f << text)) {
    err << "qeo_cli: cannot write " << cfg.out_path << "\n";
    return kExitParse;
  }
  return kExitOk;
}

}  // namespace qeo::cli

#endif  // QEO_CLI_HPP
