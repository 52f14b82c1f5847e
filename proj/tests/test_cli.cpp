#include "doctest.h"

#include "curvkit/io.hpp"
#include "process.hpp"

using curvkit::io::Json;
using testing::run_cli;
using testing::scratch_dir;
using testing::write_file;

namespace {

std::string path(const std::string& name) { return (scratch_dir() / name).string(); }

Json parse(const std::string& s) { return Json::parse(s); }

bool error_line_ok(const std::string& err, const std::string& kind) {
  const auto nl = err.find('\n');
  if (nl == std::string::npos || nl + 1 != err.size()) return false;
  const Json j = Json::parse(err);
  return j["error"] == kind && j["reason"].is_string();
}

}  // namespace

TEST_CASE("generated local sharp tensor validates") {
  const auto gen = run_cli("gen local-sharp --n 4 --N 1 -o " + path("ls41.json"));
  REQUIRE(gen.code == 0);
  const auto v = run_cli("validate " + path("ls41.json"));
  CHECK(v.code == 0);
  CHECK(parse(v.out)["valid"] == true);
  const Json file = curvkit::io::read_file(path("ls41.json"));
  CHECK(file["metadata"]["eta"] == 2);
  CHECK(file["metadata"]["exact_cover"] == true);
}

TEST_CASE("bound on the generated theta model") {
  const auto r = run_cli("bound --gen theta --n 4 --rank 4");
  REQUIRE(r.code == 0);
  const Json j = parse(r.out);
  CHECK(j["r_point"] == 2);
  CHECK(j["bound_main1"] == 2);
  CHECK(j["pass_main1"] == true);
  CHECK(j["status_main1"] == "pass");
  CHECK(j["eta_exact"] == true);
}

TEST_CASE("decomposing the zero tensor") {
  write_file(scratch_dir() / "zero.json", R"({"n": 3, "entries": []})");
  const auto r = run_cli("decompose " + path("zero.json"));
  CHECK(r.code == 0);
  const Json j = parse(r.out);
  CHECK(j["N"] == 0);
  CHECK(j["pos"].empty());
  CHECK(j["neg"].empty());
}

TEST_CASE("symmetry violations exit 1 with a report") {
  write_file(scratch_dir() / "bad.json",
             R"({"n": 2, "entries": [{"i":1,"j":1,"k":2,"l":2,"re":1},{"i":2,"j":1,"k":1,"l":2,"re":0}]})");
  const auto r = run_cli("validate " + path("bad.json"));
  CHECK(r.code == 1);
  const Json j = parse(r.out);
  CHECK(j["valid"] == false);
  CHECK(j["location"] == Json::parse("[2, 1, 1, 2]"));
  CHECK(error_line_ok(r.err, "validation"));
  // Other commands refuse the same file.
  CHECK(run_cli("ricci " + path("bad.json")).code == 1);
}

TEST_CASE("malformed input exits 2") {
  write_file(scratch_dir() / "garbage.json", "{ not json");
  const auto a = run_cli("validate " + path("garbage.json"));
  CHECK(a.code == 2);
  CHECK(error_line_ok(a.err, "input"));
  CHECK(run_cli("validate " + path("missing.json")).code == 2);
  write_file(scratch_dir() / "range.json", R"({"n": 2, "entries": [{"i":3,"j":1,"k":1,"l":1,"re":1}]})");
  CHECK(run_cli("kernel " + path("range.json")).code == 2);
  const auto usage = run_cli("frobnicate");
  CHECK(usage.code == 2);
  CHECK(error_line_ok(usage.err, "usage"));
  CHECK(run_cli("--trials 0 selftest").code == 2);
  CHECK(run_cli("--format xml kernel " + path("zero.json")).code == 2);
  CHECK(run_cli("hsc " + path("ls41.json") + " --v '[1, 2'").code == 2);
}

TEST_CASE("indefinite curvature is outside the hypotheses") {
  write_file(scratch_dir() / "indef.json", R"({"n": 2, "N": 1,
      "pos": [[1, 0, 0, 0]], "neg": [[0, 0, 0, 1]]})");
  REQUIRE(run_cli("recover " + path("indef.json") + " -o " + path("indef_t.json")).code == 0);
  const auto b = run_cli("bound " + path("indef_t.json"));
  CHECK(b.code == 2);
  CHECK(error_line_ok(b.err, "precondition"));
  CHECK(b.err.find("signature") != std::string::npos);
  CHECK(run_cli("eta " + path("indef_t.json")).code == 2);
}

TEST_CASE("round trip through files") {
  REQUIRE(run_cli("gen theta --n 3 --seed 4 -o " + path("t3.json")).code == 0);
  REQUIRE(run_cli("decompose " + path("t3.json") + " -o " + path("t3d.json")).code == 0);
  REQUIRE(run_cli("recover " + path("t3d.json") + " -o " + path("t3r.json")).code == 0);
  const auto a = curvkit::io::tensor_from_json(curvkit::io::read_file(path("t3.json")));
  const auto b = curvkit::io::tensor_from_json(curvkit::io::read_file(path("t3r.json")));
  double diff = 0.0;
  for (std::size_t x = 0; x < a.array().data().size(); ++x)
    diff += std::norm(a.array().data()[x] - b.array().data()[x]);
  CHECK(std::sqrt(diff) <= 1e-8 * a.frobenius_norm());
}

TEST_CASE("hsc, ricci, kernel and eta commands") {
  const auto h = run_cli("hsc " + path("ls41.json") + " --v '[1, 0, 0, 0]'");
  REQUIRE(h.code == 0);
  CHECK(parse(h.out)["hsc"] == 0.0);
  const auto h2 = run_cli("hsc " + path("ls41.json") + " --v '[1, 0, 1, 0]'");
  CHECK(parse(h2.out)["hsc"].get<double>() == doctest::Approx(0.25));

  write_file(scratch_dir() / "g.json", R"({"n": 4, "g": [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]})");
  const auto ric = run_cli("ricci " + path("ls41.json") + " --metric " + path("g.json"));
  REQUIRE(ric.code == 0);
  CHECK(parse(ric.out)["ricci"].size() == 16);

  const auto k = run_cli("kernel " + path("ls41.json"));
  CHECK(parse(k.out)["n_R"] == 4);

  const auto e = run_cli("--trials 20 eta " + path("ls41.json"));
  REQUIRE(e.code == 0);
  const Json ej = parse(e.out);
  CHECK(ej["eta_lower"] == 2);
  CHECK(ej["exact"] == true);
  CHECK(ej["witness_residual"].get<double>() < 1e-8);
}

TEST_CASE("quadric commands") {
  REQUIRE(run_cli("gen sharp --n 5 --N 2 -o " + path("sharp.json")).code == 0);
  const auto k = run_cli("quadric kernels " + path("sharp.json"));
  REQUIRE(k.code == 0);
  const Json kj = parse(k.out);
  CHECK(kj["common_kernel"]["d"] == 0);
  CHECK(kj["quadrics"][0]["rank"] == 4);
  CHECK(kj["quadrics"][1]["rank"] == 2);
  const auto i = run_cli("quadric isotropic " + path("sharp.json"));
  REQUIRE(i.code == 0);
  const Json ij = parse(i.out);
  CHECK(ij["quadrics"][0]["bound"] == 3);
  CHECK(ij["quadrics"][0]["subspace"]["d"] == 3);
  CHECK(ij["quadrics"][1]["subspace"]["d"] == 4);
}

TEST_CASE("multi-point bound reports the sampled minimum") {
  REQUIRE(run_cli("gen theta --n 4 --rank 4 --seed 1 -o " + path("p1.json")).code == 0);
  REQUIRE(run_cli("gen local-sharp --n 4 --N 1 -o " + path("p2.json")).code == 0);
  const auto r = run_cli("bound " + path("p1.json") + " " + path("p2.json"));
  REQUIRE(r.code == 0);
  const Json j = parse(r.out);
  CHECK(j["points"].size() == 2);
  CHECK(j["sampled_r0"] == 2);
  CHECK(j["status_main1"] == "pass");
}

TEST_CASE("tolerance from the environment, flag wins") {
  // One unit square plus one tiny square.
  write_file(scratch_dir() / "two.json", R"({"n": 2, "N": 2,
      "pos": [[1, 0, 0, 0], [0, 0, 0, 1e-3]], "neg": []})");
  REQUIRE(run_cli("recover " + path("two.json") + " -o " + path("two_t.json")).code == 0);
  CHECK(parse(run_cli("decompose " + path("two_t.json")).out)["N"] == 2);
  CHECK(parse(run_cli("decompose " + path("two_t.json"), "CURVKIT_TOL=1e-5").out)["N"] == 1);
  CHECK(parse(run_cli("--tol 1e-9 decompose " + path("two_t.json"), "CURVKIT_TOL=1e-5").out)["N"] == 2);
  CHECK(run_cli("decompose " + path("two_t.json"), "CURVKIT_TOL=abc").code == 2);
}

TEST_CASE("identical seeds give identical bytes") {
  const std::string cmd = "--seed 9 --trials 30 bound --gen theta --n 6 --rank 5";
  const auto a = run_cli(cmd);
  const auto b = run_cli(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run_cli("--seed 3 gen theta --n 5").out == run_cli("--seed 3 gen theta --n 5").out);
  CHECK(run_cli("--seed 3 gen theta --n 5").out != run_cli("--seed 4 gen theta --n 5").out);
}

TEST_CASE("text output and help") {
  const auto t = run_cli("--format text kernel " + path("ls41.json"));
  CHECK(t.code == 0);
  CHECK(t.out.find("\nn_R           4\n") != std::string::npos);
  const auto h = run_cli("--help");
  CHECK(h.code == 0);
  for (const char* flag : {"--tol", "--trials", "--seed", "--format", "--output"})
    CHECK(h.out.find(flag) != std::string::npos);
  CHECK(run_cli("bound --help").out.find("--gen") != std::string::npos);
}
