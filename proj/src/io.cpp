#include "curvkit/io.hpp"

#include <fstream>
#include <sstream>

namespace curvkit::io {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

int read_dim(const Json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1) throw InputError("field n must be a positive integer");
  return n;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(m(r, c)));
  return out;
}

CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  return guarded("matrix", [&] {
    if (!j.is_array()) throw InputError("matrix must be a JSON array");
    CMatrix m(rows, cols);
    const auto flat_size = static_cast<std::size_t>(rows * cols);
    if (j.size() != flat_size && j.size() == static_cast<std::size_t>(rows)) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(cols))
          throw InputError("matrix row " + std::to_string(r + 1) + " has the wrong length");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
      }
      return m;
    }
    if (j.size() != flat_size)
      throw InputError("matrix needs " + std::to_string(flat_size) + " entries, got " +
                       std::to_string(j.size()));
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r * cols + c]);
    return m;
  });
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  return guarded("vector", [&] {
    if (!j.is_array() || j.empty()) throw InputError("vector must be a nonempty JSON array");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
  });
}

Json tensor_to_json(const KahlerCurvature& r) {
  const int n = r.dim();
  Json entries = Json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex z = r(i, j, k, l);
          if (z == Complex(0.0, 0.0)) continue;
          entries.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"l", l + 1},
                             {"re", z.real() + 0.0}, {"im", z.imag() + 0.0}});
        }
  return {{"n", n}, {"entries", entries}};
}

KahlerCurvature tensor_from_json(const Json& j, double rel_tol) {
  return guarded("tensor", [&] {
    const int n = read_dim(j);
    std::vector<TensorEntry> entries;
    for (const auto& e : j.at("entries")) {
      TensorEntry t;
      t.index = {e.at("i").get<int>() - 1, e.at("j").get<int>() - 1, e.at("k").get<int>() - 1,
                 e.at("l").get<int>() - 1};
      t.value = {e.value("re", 0.0), e.value("im", 0.0)};
      entries.push_back(t);
    }
    return from_entries(n, entries, rel_tol);
  });
}

Json metric_to_json(const HermitianMetric& g) {
  return {{"n", g.dim()}, {"g", matrix_to_json(g.matrix())}};
}

HermitianMetric metric_from_json(const Json& j) {
  return guarded("metric", [&] {
    const int n = read_dim(j);
    return HermitianMetric(matrix_from_json(j.at("g"), n, n));
  });
}

Json form_to_json(const HermitianForm22& form) {
  return {{"n", form.dim()}, {"D", form.pair_dim()}, {"A", matrix_to_json(form.matrix())}};
}

HermitianForm22 form_from_json(const Json& j) {
  return guarded("Hermitian form", [&] {
    const int n = read_dim(j);
    const int d = pair_count(n);
    return HermitianForm22(n, matrix_from_json(j.at("A"), d, d));
  });
}

Json decomposition_to_json(const SquareDecomposition& dec) {
  Json pos = Json::array();
  Json neg = Json::array();
  for (const auto& f : dec.pos) pos.push_back(matrix_to_json(f.coeffs()));
  for (const auto& g : dec.neg) neg.push_back(matrix_to_json(g.coeffs()));
  return {{"n", dec.n}, {"N", dec.length()}, {"pos", pos}, {"neg", neg}};
}

SquareDecomposition decomposition_from_json(const Json& j) {
  return guarded("decomposition", [&] {
    SquareDecomposition dec;
    dec.n = read_dim(j);
    for (const auto& m : j.at("pos")) dec.pos.emplace_back(matrix_from_json(m, dec.n, dec.n));
    for (const auto& m : j.at("neg")) dec.neg.emplace_back(matrix_from_json(m, dec.n, dec.n));
    if (j.contains("N") && j.at("N").get<int>() != dec.length())
      throw InputError("field N disagrees with the listed forms");
    return dec;
  });
}

Json quadrics_to_json(int n, const std::vector<QuadraticForm>& quadrics) {
  Json list = Json::array();
  for (const auto& q : quadrics) list.push_back(matrix_to_json(q.coeffs()));
  return {{"n", n}, {"quadrics", list}};
}

std::vector<QuadraticForm> quadrics_from_json(const Json& j, int* n_out) {
  return guarded("quadric list", [&] {
    const int n = read_dim(j);
    std::vector<QuadraticForm> out;
    for (const auto& m : j.at("quadrics")) {
      const CMatrix f = matrix_from_json(m, n, n);
      if ((f - f.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, f.cwiseAbs().maxCoeff()))
        throw InputError("quadric matrix is not symmetric");
      out.emplace_back(f);
    }
    if (n_out) *n_out = n;
    return out;
  });
}

Json subspace_to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < s.basis().cols(); ++c)
    for (Eigen::Index r = 0; r < s.basis().rows(); ++r) basis.push_back(to_json(s.basis()(r, c)));
  return {{"n", s.ambient_dim()}, {"d", s.dim()}, {"basis", basis}};
}

Subspace subspace_from_json(const Json& j) {
  return guarded("subspace", [&] {
    const int n = read_dim(j);
    const auto& basis = j.at("basis");
    if (basis.size() % static_cast<std::size_t>(n) != 0)
      throw InputError("subspace basis length is not a multiple of n");
    const auto d = static_cast<Eigen::Index>(basis.size() / n);
    if (j.contains("d") && j.at("d").get<Eigen::Index>() != d)
      throw InputError("field d disagrees with the basis length");
    CMatrix b(n, d);
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < n; ++r) b(r, c) = complex_from_json(basis[c * n + r]);
    return Subspace(n, b);
  });
}

Json point_report_to_json(const PointReport& rep) {
  return {{"n", rep.n},
          {"N", rep.big_n},
          {"n_R", rep.n_r},
          {"signature", {rep.signature.n_plus, rep.signature.n_minus, rep.signature.n_zero}},
          {"eta_lower", rep.eta.lower},
          {"eta_upper", rep.eta.upper},
          {"eta_exact", rep.eta.exact},
          {"eta_upper_provenance", rep.eta.upper_provenance},
          {"r_point", rep.r_point},
          {"bound_main1", rep.bound_main1},
          {"bound_main2", rep.bound_main2},
          {"ricci_det", to_json(rep.ricci_det)},
          {"ricci_definite", rep.ricci_definite},
          {"ricci_nondegenerate", rep.ricci_nondegenerate},
          {"pass_main1", rep.pass_main1()},
          {"pass_main2", rep.pass_main2()},
          {"status_main1", to_string(rep.main1)},
          {"status_main2", to_string(rep.main2)},
          {"witness", subspace_to_json(rep.eta.witness)}};
}

Json local_sharp_metadata_to_json(const LocalSharpMetadata& md) {
  Json squares = Json::array();
  for (int j : md.completion_squares) squares.push_back(j + 1);
  return {{"eta", md.eta},
          {"blocks", md.blocks},
          {"negated", md.negated},
          {"exact_cover", md.exact_cover},
          {"multiplicities", md.multiplicities},
          {"completion_squares", squares},
          {"indexing", "ceil-block cover of coordinates 1..eta"}};
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace curvkit::io
