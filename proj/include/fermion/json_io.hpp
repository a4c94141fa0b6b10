#pragma once

#include <string>

#include "json.hpp"

#include "fermion/clifford.hpp"
#include "fermion/geometry.hpp"
#include "fermion/multivector.hpp"

namespace fermion {

using nlohmann::json;

// JSON schemas for the value types. Multivectors:
//   {"m": 4, "mode": "numeric", "hbar": 0.5,
//    "terms": [{"mask": [1, 2], "re": 1.0, "im": 0.0}, ...]}
//   {"m": 4, "mode": "formal",
//    "terms": [{"mask": [1, 2], "laurent": {"-1": [re, im], "0": [re, im]}}]}
// Masks are strictly increasing 1-based generator lists; duplicates are
// rejected. Clifford elements use the same schema plus "algebra": "clifford".
// Formal coefficients are parsed exactly (every double is dyadic).
//
// Matrices are row major with an explicit dimension:
//   real     {"m": 4, "rows": [[...], ...]}
//   complex  {"m": 4, "rows": [[[re, im], ...], ...]}

// A parsed multivector in either scalar mode.
struct ParsedMultivector {
  bool formal = false;
  double hbar = 1.0;          // numeric mode only
  bool clifford = false;
  MultivectorC numeric{1};
  MultivectorF exact{1};
};

ParsedMultivector parse_multivector(const json& j, const std::string& where);
json dump_multivector(const MultivectorC& f, double hbar, bool clifford = false);
json dump_multivector(const MultivectorF& f, bool clifford = false);

MatrixXd parse_real_matrix(const json& j, const std::string& where);
MatrixXcd parse_complex_matrix(const json& j, const std::string& where);
json dump_real_matrix(const MatrixXd& m);
json dump_complex_matrix(const MatrixXcd& m);

// Round-trip canonicalisation used by the determinism checks.
json canonical_multivector_json(const json& j, const std::string& where);

}  // namespace fermion
