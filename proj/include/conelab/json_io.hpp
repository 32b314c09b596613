// json_io.hpp — JSON formats for matrices, bipartite operators, verdicts,
// polyhedral cones and check reports. Complex numbers are [re, im] pairs.

#pragma once

#include "conelab/free_systems.hpp"
#include "conelab/slice.hpp"

#include "json.hpp"

namespace conelab {

using Json = nlohmann::json;

// {"n": int, "entries": [[[re,im],...],...]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json hermitian_to_json(const HermitianMatrix& h);
HermitianMatrix hermitian_from_json(const Json& j);

// {"d": int, "s": int, "mat": <matrix>}
Json bipartite_to_json(const BipartiteOperator& x);
BipartiteOperator bipartite_from_json(const Json& j);

// {"status": "in"|"out"|"inconclusive", "residual": float,
//  "certificate": {"kind": ...}}
Json verdict_to_json(const Verdict& v);

// {"dim": d, "rays": [[...]], "dual_rays": [[...]], "order_unit": [...]}
Json cone_to_json(const PolyhedralCone& c);
PolyhedralCone cone_from_json(const Json& j);

// {"passed": bool, "checks": [{"name","passed","detail"},...]}
Json report_to_json(const Report& r);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

// Thrown on malformed input files; the CLI maps it to the input-error exit.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace conelab
