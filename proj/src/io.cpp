#include "choi/io.hpp"

#include <fstream>

namespace choi {

namespace {

nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError{"expected a [re, im] pair, got " + j.dump()};
  return Complex(j[0].get<double>(), j[1].get<double>());
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError{std::string("missing key \"") + key + "\" in " + j.dump().substr(0, 120)};
  return *it;
}

}  // namespace

nlohmann::json matrix_to_json(const CMat& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError{"matrix must be an object"};
  const auto rows = require(j, "rows").get<long>();
  const auto cols = require(j, "cols").get<long>();
  if (rows <= 0 || cols <= 0) throw IoError{"matrix dimensions must be positive"};
  const auto& data = require(j, "data");
  if (!data.is_array() || static_cast<long>(data.size()) != rows)
    throw IoError{"matrix data must hold " + std::to_string(rows) + " rows"};
  CMat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const auto& row = data[i];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw IoError{"matrix row " + std::to_string(i) + " must hold " + std::to_string(cols) +
                    " entries"};
    for (long k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[k]);
  }
  if (!all_finite(m)) throw IoError{"matrix entries must be finite"};
  return m;
}

nlohmann::json vector_to_json(const CVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVec vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw IoError{"vector must be an array"};
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

nlohmann::json map_to_json(const MatMap& phi) {
  return {{"d_in", phi.d_in}, {"d_out", phi.d_out}, {"choi", matrix_to_json(phi.choi)}};
}

MatMap map_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError{"map must be an object"};
  if (j.contains("kraus")) {
    const auto& list = j["kraus"];
    if (!list.is_array() || list.empty()) throw IoError{"kraus must be a non-empty array"};
    std::vector<CMat> kraus;
    kraus.reserve(list.size());
    for (const auto& item : list) kraus.push_back(matrix_from_json(item));
    try {
      MatMap phi = map_from_kraus(kraus);
      if (j.value("pre_transpose", false))
        phi = compose(phi, transpose_map(phi.d_in));
      return phi;
    } catch (const LinalgError& e) {
      throw IoError{e.what()};
    }
  }
  const int d_in = require(j, "d_in").get<int>();
  const int d_out = require(j, "d_out").get<int>();
  CMat choi = matrix_from_json(require(j, "choi"));
  try {
    return map_from_choi(d_in, d_out, choi);
  } catch (const LinalgError& e) {
    throw IoError{e.what()};
  }
}

nlohmann::json state_to_json(const BipartiteState& s) {
  return {{"dA", s.d_a}, {"dB", s.d_b}, {"matrix", matrix_to_json(s.rho)}};
}

BipartiteState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError{"state must be an object"};
  const int d_a = require(j, "dA").get<int>();
  const int d_b = require(j, "dB").get<int>();
  CMat m = matrix_from_json(require(j, "matrix"));
  try {
    return BipartiteState::make(d_a, d_b, m);
  } catch (const LinalgError& e) {
    throw IoError{e.what()};
  }
}

nlohmann::json verdict_to_json(const Verdict& v) {
  return {{"status", to_string(v.status)},
          {"certificate", v.certificate.is_null() ? nlohmann::json() : v.certificate},
          {"witness", v.witness.is_null() ? nlohmann::json() : v.witness},
          {"evidence",
           {{"samples", v.evidence.samples_tested},
            {"min_value", v.evidence.min_value_seen},
            {"seed", v.evidence.seed}}}};
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError{"cannot open " + path};
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError{path + ": " + e.what()};
  }
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError{"cannot write " + path};
  out << j.dump(2) << "\n";
  if (!out) throw IoError{"write failed for " + path};
}

}  // namespace choi
