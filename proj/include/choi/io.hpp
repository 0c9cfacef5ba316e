#pragma once

#include <string>

#include "json.hpp"

#include "choi/linalg.hpp"
#include "choi/matmap.hpp"
#include "choi/states.hpp"
#include "choi/verdict.hpp"

namespace choi {

struct IoError {
  std::string message;
};

// Matrix object: {"rows": n, "cols": m, "data": [[[re,im],...],...]} with
// row-major nesting.
nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

// Vectors are flat [[re,im],...] arrays.
nlohmann::json vector_to_json(const CVec& v);
CVec vector_from_json(const nlohmann::json& j);

// Map object: {"d_in": n, "d_out": m, "choi": <matrix>}. The loader also
// accepts {"kraus": [<matrix>,...], "pre_transpose": bool}; pre_transpose
// builds sum_i Ad V_i o t.
nlohmann::json map_to_json(const MatMap& phi);
MatMap map_from_json(const nlohmann::json& j);

// State object: {"dA": a, "dB": b, "matrix": <matrix>}.
nlohmann::json state_to_json(const BipartiteState& s);
BipartiteState state_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict& v);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace choi
