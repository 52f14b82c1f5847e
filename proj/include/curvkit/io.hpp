#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "curvkit/curvature.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/subspace.hpp"
#include "curvkit/zeroset.hpp"

// JSON interchange. Complex numbers are [re, im] arrays (a bare number is
// read as a real value); matrices are row-major flat lists of complex
// numbers unless stated otherwise (nested row lists are also accepted on
// input); tensor indices are 1-based. Readers throw InputError.
namespace curvkit::io {

using Json = nlohmann::json;

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);
Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

/// {"n", "entries": [{"i","j","k","l","re","im"}]}; only nonzero entries are written.
Json tensor_to_json(const KahlerCurvature& r);
KahlerCurvature tensor_from_json(const Json& j, double rel_tol = 1e-10);

/// {"n", "g"}
Json metric_to_json(const HermitianMetric& g);
HermitianMetric metric_from_json(const Json& j);

/// {"n", "D", "A"}
Json form_to_json(const HermitianForm22& form);
HermitianForm22 form_from_json(const Json& j);

/// {"n", "N", "pos": [matrix], "neg": [matrix]}
Json decomposition_to_json(const SquareDecomposition& dec);
SquareDecomposition decomposition_from_json(const Json& j);

/// {"n", "quadrics": [matrix]}
Json quadrics_to_json(int n, const std::vector<QuadraticForm>& quadrics);
std::vector<QuadraticForm> quadrics_from_json(const Json& j, int* n_out = nullptr);

/// {"n", "d", "basis"}; basis is column-major (n x d).
Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

Json point_report_to_json(const PointReport& rep);
Json local_sharp_metadata_to_json(const LocalSharpMetadata& md);

Json read_file(const std::string& path);
/// Serialized form used by every writer: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace curvkit::io
