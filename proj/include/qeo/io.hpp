#ifndef QEO_IO_HPP
#define QEO_IO_HPP

// File formats shared by the CLI and tests.
//
//   matrix JSON       {"dim": n, "re": [[...]], "im": [[...]]}
//   probability JSON  {"k": 6, "r": 2, "table": {"1,2": 0.0333, ...}}
//                     (k and r may be omitted when the keys determine them)
//   CSV numbers       %.12g, '.' decimal separator regardless of locale

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qeo/dice.hpp"
#include "qeo/errors.hpp"
#include "qeo/linalg.hpp"

namespace qeo::io {

using nlohmann::json;

// 12 significant digits. snprintf's %g only consults LC_NUMERIC, which the
// library never changes, so output stays '.'-separated.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline json matrix_to_json(const ComplexMatrix& m) {
  if (!m.is_square()) throw StructuralError("matrix_to_json: matrix is not square");
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ii = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  try {
    const auto n = j.at("dim").get<std::size_t>();
    const auto& re = j.at("re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (n == 0 || re.size() != n || (im && im->size() != n)) throw ParseError("matrix JSON: row count differs from dim");
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (re[r].size() != n || (im && (*im)[r].size() != n)) throw ParseError("matrix JSON: row length differs from dim");
      for (std::size_t c = 0; c < n; ++c) {
        const double a = re[r][c].get<double>();
        const double b = im ? (*im)[r][c].get<double>() : 0.0;
        m(r, c) = Complex(a, b);
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON: ") + e.what());
  }
}

inline ComplexMatrix read_matrix_file(const std::string& path) { return matrix_from_json(parse_json(read_file(path))); }

inline json table_to_json(const dice::ProbabilityTable& t) {
  json table = json::object();
  for (std::size_t f = 0; f < t.values.size(); ++f) table[dice::tuple_label(t.tuple(f))] = t.values[f];
  return json{{"k", t.k}, {"r", t.r}, {"table", std::move(table)}};
}

namespace detail {

inline std::vector<int> parse_tuple_key(const std::string& key) {
  std::vector<int> faces;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const std::size_t comma = key.find(',', pos);
    const std::string part = key.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 1) throw ParseError("");
      faces.push_back(v - 1);
    } catch (const std::exception&) {
      throw ParseError("probability JSON: bad tuple key \"" + key + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return faces;
}

}  // namespace detail

// Missing tuples are zero. Shape comes from "k"/"r" or, failing that, from the
// largest face and the key length.
inline dice::ProbabilityTable table_from_json(const json& j) {
  try {
    const json& body = j.contains("table") ? j.at("table") : j;
    if (!body.is_object() || body.empty()) throw ParseError("probability JSON: expected a non-empty object of tuples");
    std::size_t k = 0;
    int r = -1;
    std::vector<std::pair<std::vector<int>, double>> entries;
    for (const auto& [key, val] : body.items()) {
      auto faces = detail::parse_tuple_key(key);
      if (r < 0) r = static_cast<int>(faces.size());
      if (static_cast<int>(faces.size()) != r) throw ParseError("probability JSON: tuples of different length");
      for (int f : faces) k = std::max(k, static_cast<std::size_t>(f) + 1);
      entries.emplace_back(std::move(faces), val.get<double>());
    }
    if (j.contains("k")) {
      const auto declared = j.at("k").get<std::size_t>();
      if (declared < k) throw ParseError("probability JSON: face exceeds declared k");
      k = declared;
    }
    if (j.contains("r") && j.at("r").get<int>() != r) throw ParseError("probability JSON: tuple length differs from r");
    dice::ProbabilityTable t(k, r);
    for (const auto& [faces, v] : entries) t.at(faces) = v;
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("probability JSON: ") + e.what());
  }
}

}  // namespace qeo::io

#endif  // QEO_IO_HPP
