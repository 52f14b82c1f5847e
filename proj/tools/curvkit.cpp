#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "curvkit/curvature.hpp"
#include "curvkit/hermform.hpp"
#include "curvkit/io.hpp"
#include "curvkit/quadric.hpp"
#include "curvkit/rng.hpp"
#include "curvkit/suites.hpp"
#include "curvkit/zeroset.hpp"

namespace {

using namespace curvkit;
using io::Json;

enum ExitCode { kOk = 0, kFailed = 1, kBadInput = 2, kNumerical = 3 };

struct RunConfig {
  double tol = kDefaultTol;
  int trials = 200;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
};

struct Outcome {
  Json doc;
  int code = kOk;
};

// ---- text rendering -------------------------------------------------------

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    return;
  }
  if (j.is_array() && !j.empty() && j[0].is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    return;
  }
  rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
}

std::string render_text(const Json& doc) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream os;
  for (const auto& [key, value] : rows)
    os << key << std::string(width - key.size() + 2, ' ') << value << "\n";
  return os.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw InputError("cannot write " + cfg.output);
  out << text;
}

void error_line(const std::string& kind, const std::string& reason) {
  std::cerr << Json{{"error", kind}, {"reason", reason}}.dump() << "\n";
}

// ---- helpers --------------------------------------------------------------

double parse_tolerance(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !(value > 0.0) || !std::isfinite(value))
    throw InputError("CURVKIT_TOL must be a positive number, got '" + text + "'");
  return value;
}

KahlerCurvature load_tensor(const std::string& path, const RunConfig& cfg) {
  return io::tensor_from_json(io::read_file(path), std::min(cfg.tol, 1e-10));
}

HermitianMetric load_metric(const std::string& path, int n) {
  if (path.empty()) return HermitianMetric::identity(n);
  HermitianMetric g = io::metric_from_json(io::read_file(path));
  if (g.dim() != n) throw InputError("metric dimension does not match the tensor");
  return g;
}

Json signature_json(const Signature& s) {
  return {{"n_plus", s.n_plus}, {"n_minus", s.n_minus}, {"n_zero", s.n_zero}};
}

KahlerCurvature theta_tensor(int n, int rank, std::uint64_t seed) {
  if (n < 1) throw InputError("--n must be positive");
  if (rank < 0 || rank > n) throw InputError("--rank must lie in 0..n");
  Rng rng(seed, 0);
  const QuadraticForm f = random_quadric_of_rank(n, rank, rng);
  return graph_curvature({f.coeffs()}, -1);
}

// Aggregates pointwise reports over a sample of points.
Json aggregate_reports(const std::vector<PointReport>& reps) {
  const int n = reps.front().n;
  int big_n = 0;
  int n_r = 0;
  int r_lo = n;  // n - eta_upper
  int r_hi = n;  // n - eta_lower
  bool nondegenerate = true;
  Json points = Json::array();
  for (const auto& rep : reps) {
    if (rep.n != n) throw InputError("all sample points must have the same dimension");
    big_n = std::max(big_n, rep.big_n);
    n_r = std::max(n_r, rep.n_r);
    r_lo = std::min(r_lo, n - rep.eta.upper);
    r_hi = std::min(r_hi, n - rep.eta.lower);
    nondegenerate = nondegenerate && rep.ricci_nondegenerate;
    points.push_back(io::point_report_to_json(rep));
  }
  const int b1 = big_n >= 1 ? bound_main1(n, big_n) : 0;
  const int b2 = big_n >= 1 ? bound_main2(n, big_n, n_r) : 0;
  auto status = [&](int bound) {
    if (r_lo >= bound) return CheckStatus::pass;
    if (r_hi < bound) return CheckStatus::fail;
    return CheckStatus::inconclusive;
  };
  const CheckStatus s1 = (nondegenerate && big_n >= 1) ? status(b1) : CheckStatus::not_applicable;
  const CheckStatus s2 = status(b2);
  return {{"points", points},
          {"n", n},
          {"N", big_n},
          {"n_R", n_r},
          {"sampled_r0", r_hi},
          {"sampled_r0_lower", r_lo},
          {"sampled_r0_exact", r_lo == r_hi},
          {"bound_main1", b1},
          {"bound_main2", b2},
          {"status_main1", to_string(s1)},
          {"status_main2", to_string(s2)},
          {"pass_main1", s1 == CheckStatus::pass},
          {"pass_main2", s2 == CheckStatus::pass}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvkit: Kaehler curvature tensors, sum-of-squares decompositions and "
               "zero-set bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  auto* tol_opt = app.add_option("--tol", cfg.tol,
                                 "Relative tolerance for ranks and signatures (default 1e-9; "
                                 "the environment variable CURVKIT_TOL applies when the flag is absent)")
                      ->check(CLI::PositiveNumber);
  app.add_option("--trials", cfg.trials, "Randomized trials for the eta search (default 200)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed of the pseudorandom generator (default 0)");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("-o,--output", cfg.output, "Write the output document to this file");

  std::function<Outcome()> action;

  std::string tensor_path;
  std::string metric_path;

  auto* validate_cmd = app.add_subcommand("validate", "Check the Kaehler symmetries of a tensor file");
  validate_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  validate_cmd->callback([&] {
    action = [&] {
      try {
        const KahlerCurvature r = load_tensor(tensor_path, cfg);
        return Outcome{{{"valid", true},
                        {"n", r.dim()},
                        {"max_abs", r.max_abs()},
                        {"frobenius_norm", r.frobenius_norm()}},
                       kOk};
      } catch (const SymmetryViolation& v) {
        auto one_based = [](const Index4& x) {
          return Json::array({x[0] + 1, x[1] + 1, x[2] + 1, x[3] + 1});
        };
        error_line("validation", v.what());
        return Outcome{{{"valid", false},
                        {"reason", v.what()},
                        {"residual", v.residual()},
                        {"location", one_based(v.location())},
                        {"partner", one_based(v.partner())}},
                       kFailed};
      }
    };
  });

  auto* decompose_cmd = app.add_subcommand("decompose", "Sum/difference-of-squares decomposition of H");
  decompose_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  decompose_cmd->callback([&] {
    action = [&] {
      const HermitianForm22 form = hsc_numerator_form(load_tensor(tensor_path, cfg));
      Json doc = io::decomposition_to_json(decompose(form, cfg.tol));
      doc["signature"] = signature_json(signature(form, cfg.tol));
      return Outcome{doc, kOk};
    };
  });

  std::string decomp_path;
  auto* recover_cmd = app.add_subcommand("recover", "Rebuild the tensor from a decomposition");
  recover_cmd->add_option("decomposition", decomp_path, "Decomposition JSON file")->required();
  recover_cmd->callback([&] {
    action = [&] {
      return Outcome{io::tensor_to_json(recover(io::decomposition_from_json(io::read_file(decomp_path)))),
                     kOk};
    };
  });

  std::string vector_text;
  auto* hsc_cmd = app.add_subcommand("hsc", "Holomorphic sectional curvature in a direction");
  hsc_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  hsc_cmd->add_option("--v", vector_text, "Direction as a JSON array, e.g. '[1, [0, 1]]'")->required();
  hsc_cmd->add_option("--metric", metric_path, "Metric JSON file (default identity)");
  hsc_cmd->callback([&] {
    action = [&] {
      const KahlerCurvature r = load_tensor(tensor_path, cfg);
      Json parsed;
      try {
        parsed = Json::parse(vector_text);
      } catch (const Json::exception& e) {
        throw InputError(std::string("--v is not valid JSON: ") + e.what());
      }
      const CVector v = io::vector_from_json(parsed);
      const HermitianMetric g = load_metric(metric_path, r.dim());
      return Outcome{{{"hsc", hsc(r, g, v)},
                      {"numerator", evaluate(hsc_numerator_form(r), v)},
                      {"v", io::vector_to_json(v)}},
                     kOk};
    };
  });

  auto* ricci_cmd = app.add_subcommand("ricci", "Ricci form and scalar curvature");
  ricci_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  ricci_cmd->add_option("--metric", metric_path, "Metric JSON file (default identity)");
  ricci_cmd->callback([&] {
    action = [&] {
      const KahlerCurvature r = load_tensor(tensor_path, cfg);
      const HermitianMetric g = load_metric(metric_path, r.dim());
      const CMatrix ric = ricci(r, g);
      // Eigenvalues relative to g.
      Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> eig(ric, g.matrix(), Eigen::EigenvaluesOnly);
      Json evals = Json::array();
      for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) evals.push_back(eig.eigenvalues()(i));
      return Outcome{{{"n", r.dim()},
                      {"ricci", io::matrix_to_json(ric)},
                      {"ricci_eigenvalues", evals},
                      {"ricci_det", io::to_json(ric.determinant())},
                      {"scalar", scalar(r, g)}},
                     kOk};
    };
  });

  auto* kernel_cmd = app.add_subcommand("kernel", "Curvature kernel and rank n_R");
  kernel_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  kernel_cmd->callback([&] {
    action = [&] {
      const KahlerCurvature r = load_tensor(tensor_path, cfg);
      const Subspace l = curvature_kernel(r, cfg.tol);
      return Outcome{{{"n", r.dim()}, {"n_R", r.dim() - l.dim()}, {"kernel", io::subspace_to_json(l)}},
                     kOk};
    };
  });

  auto* eta_cmd = app.add_subcommand("eta", "Bracket the largest subspace on which H vanishes");
  eta_cmd->add_option("tensor", tensor_path, "Tensor JSON file")->required();
  eta_cmd->callback([&] {
    action = [&] {
      const HermitianForm22 form = hsc_numerator_form(load_tensor(tensor_path, cfg));
      const SquareDecomposition dec = decompose(form, cfg.tol);
      if (!dec.semi_definite())
        throw PreconditionError("holomorphic sectional curvature is indefinite; eta is undefined");
      const EtaUpper up = eta_upper(dec, cfg.tol);
      const EtaLower lo = eta_lower_search(dec, cfg.trials, cfg.seed, up.value, cfg.tol);
      return Outcome{{{"n", dec.n},
                      {"N", dec.length()},
                      {"eta_lower", lo.value},
                      {"eta_upper", up.value},
                      {"exact", lo.value == up.value},
                      {"upper_provenance", up.provenance},
                      {"witness", io::subspace_to_json(lo.witness)},
                      {"witness_residual", witness_residual(form, lo.witness, 16, cfg.seed)}},
                     kOk};
    };
  });

  std::vector<std::string> bound_paths;
  std::string gen_kind;
  int gen_n = 0;
  int gen_rank = -1;
  int gen_big_n = 1;
  bool gen_negate = false;
  auto* bound_cmd = app.add_subcommand("bound", "Certify the zero-set bounds at one or more points");
  bound_cmd->add_option("tensors", bound_paths, "Tensor JSON files, one per sample point");
  bound_cmd->add_option("--gen", gen_kind, "Generate the point instead of reading it")
      ->check(CLI::IsMember({"theta", "local-sharp"}));
  bound_cmd->add_option("--n", gen_n, "Dimension for --gen");
  bound_cmd->add_option("--rank", gen_rank, "Rank of the theta Hessian (default n)");
  bound_cmd->add_option("--N", gen_big_n, "Number of quadrics for --gen local-sharp (default 1)");
  bound_cmd->add_flag("--negate", gen_negate, "Use the negative local sharp example");
  bound_cmd->add_option("--metric", metric_path, "Metric JSON file (default identity)");
  bound_cmd->callback([&] {
    action = [&] {
      std::vector<KahlerCurvature> points;
      if (!gen_kind.empty()) {
        if (!bound_paths.empty()) throw InputError("give either tensor files or --gen, not both");
        if (gen_kind == "theta")
          points.push_back(theta_tensor(gen_n, gen_rank < 0 ? gen_n : gen_rank, cfg.seed));
        else
          points.push_back(recover(local_sharp_example(gen_n, gen_big_n, gen_negate).dec));
      } else {
        if (bound_paths.empty()) throw InputError("bound needs a tensor file or --gen");
        for (const auto& p : bound_paths) points.push_back(load_tensor(p, cfg));
      }
      std::vector<PointReport> reps;
      for (std::size_t s = 0; s < points.size(); ++s) {
        // One seed stream per sample point.
        const std::uint64_t seed = points.size() == 1 ? cfg.seed : Rng(cfg.seed, s).next_u64();
        const KahlerCurvature& r = points[s];
        reps.push_back(verify_point(r, load_metric(metric_path, r.dim()), cfg.trials, seed, cfg.tol));
      }
      if (reps.size() == 1)
        return Outcome{io::point_report_to_json(reps.front()), reps.front().any_failure() ? kFailed : kOk};
      Json doc = aggregate_reports(reps);
      const bool failed = doc["status_main1"] == "fail" || doc["status_main2"] == "fail";
      return Outcome{doc, failed ? kFailed : kOk};
    };
  });

  auto* gen_cmd = app.add_subcommand("gen", "Generate example tensors and quadric families");
  gen_cmd->require_subcommand(1);
  auto* gen_theta = gen_cmd->add_subcommand("theta", "Graph-metric tensor R = -F_ik conj(F_jl)");
  gen_theta->add_option("--n", gen_n, "Dimension")->required();
  gen_theta->add_option("--rank", gen_rank, "Rank of the random symmetric F (default n)");
  gen_theta->callback([&] {
    action = [&] {
      return Outcome{io::tensor_to_json(theta_tensor(gen_n, gen_rank < 0 ? gen_n : gen_rank, cfg.seed)),
                     kOk};
    };
  });
  auto* gen_sharp = gen_cmd->add_subcommand("sharp", "Quadrics sharing a subspace with trivial common kernel");
  gen_sharp->add_option("--n", gen_n, "Dimension")->required();
  gen_sharp->add_option("--N", gen_big_n, "Number of quadrics")->required();
  gen_sharp->callback([&] {
    action = [&] {
      const SharpFamily fam = sharp_family(gen_n, gen_big_n);
      Json doc = io::quadrics_to_json(gen_n, fam.quadrics);
      Json squares = Json::array();
      for (int j : fam.completion_squares) squares.push_back(j + 1);
      doc["N"] = gen_big_n;
      doc["eta"] = fam.eta;
      doc["blocks"] = fam.blocks;
      doc["completion_squares"] = squares;
      doc["indexing"] = "ceil-block cover of coordinates 1..eta";
      doc["shared"] = io::subspace_to_json(fam.shared);
      return Outcome{doc, kOk};
    };
  });
  auto* gen_local = gen_cmd->add_subcommand("local-sharp", "Tensor whose H is a sum of squares of the sharp family");
  gen_local->add_option("--n", gen_n, "Dimension")->required();
  gen_local->add_option("--N", gen_big_n, "Number of quadrics")->required();
  gen_local->add_flag("--negate", gen_negate, "Difference of squares with empty positive side");
  gen_local->callback([&] {
    action = [&] {
      const LocalSharpExample ex = local_sharp_example(gen_n, gen_big_n, gen_negate);
      Json doc = io::tensor_to_json(recover(ex.dec));
      doc["metadata"] = io::local_sharp_metadata_to_json(ex.metadata);
      return Outcome{doc, kOk};
    };
  });

  std::string quadrics_path;
  auto* quadric_cmd = app.add_subcommand("quadric", "Kernels and isotropic subspaces of quadrics");
  quadric_cmd->require_subcommand(1);
  auto* q_kernels = quadric_cmd->add_subcommand("kernels", "Rank and kernel of each quadric, and their intersection");
  q_kernels->add_option("quadrics", quadrics_path, "Quadric list JSON file")->required();
  q_kernels->callback([&] {
    action = [&] {
      int n = 0;
      const auto qs = io::quadrics_from_json(io::read_file(quadrics_path), &n);
      Json list = Json::array();
      for (const auto& q : qs) {
        const RankKernel rk = rank_and_kernel(q, cfg.tol);
        list.push_back({{"rank", rk.rank}, {"kernel", io::subspace_to_json(rk.kernel)}});
      }
      return Outcome{{{"n", n}, {"quadrics", list}, {"common_kernel", io::subspace_to_json(common_kernel(n, qs, cfg.tol))}},
                     kOk};
    };
  });
  auto* q_iso = quadric_cmd->add_subcommand("isotropic", "Maximal isotropic subspace of each quadric");
  q_iso->add_option("quadrics", quadrics_path, "Quadric list JSON file")->required();
  q_iso->callback([&] {
    action = [&] {
      int n = 0;
      const auto qs = io::quadrics_from_json(io::read_file(quadrics_path), &n);
      Json list = Json::array();
      for (const auto& q : qs) {
        const int rank = rank_and_kernel(q, cfg.tol).rank;
        const Subspace w = max_isotropic(q, cfg.tol);
        list.push_back({{"rank", rank},
                        {"bound", isotropic_bound(n, rank)},
                        {"subspace", io::subspace_to_json(w)},
                        {"residual", isotropy_residual(q, w)}});
      }
      return Outcome{{{"n", n}, {"quadrics", list}}, kOk};
    };
  });

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the randomized invariant suites");
  selftest_cmd->callback([&] {
    action = [&] {
      Json list = Json::array();
      bool all = true;
      for (const auto& s : suites::all_suites()) {
        const suites::SuiteResult res = suites::run_suite(s, cfg.seed);
        if (cfg.format == "text") std::cerr << suites::format_result(res) << "\n";
        all = all && res.passed();
        list.push_back({{"id", res.id},
                        {"name", res.name},
                        {"passed", res.passed()},
                        {"correct", res.correct},
                        {"within_budget", res.seconds <= res.budget_seconds},
                        {"budget_seconds", res.budget_seconds},
                        {"detail", res.detail}});
      }
      return Outcome{{{"all_passed", all}, {"seed", cfg.seed}, {"suites", list}}, all ? kOk : kFailed};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_line("usage", e.what());
    return kBadInput;
  }

  try {
    if (tol_opt->count() == 0)
      if (const char* env = std::getenv("CURVKIT_TOL")) cfg.tol = parse_tolerance(env);
    const Outcome out = action();
    emit(cfg, cfg.format == "text" ? render_text(out.doc) : io::dump(out.doc));
    return out.code;
  } catch (const ValidationError& e) {
    error_line("validation", e.what());
    return kFailed;
  } catch (const InputError& e) {
    error_line("input", e.what());
    return kBadInput;
  } catch (const PreconditionError& e) {
    error_line("precondition", e.what());
    return kBadInput;
  } catch (const NumericalError& e) {
    error_line("numerical", e.what());
    return kNumerical;
  } catch (const Json::exception& e) {
    error_line("input", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    error_line("numerical", e.what());
    return kNumerical;
  }
}
