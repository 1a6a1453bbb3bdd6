// End-to-end checks of the command-line interface: verb behavior, output
// formats, and the exit-code contract (0 success, 1 input error, 2 geometric
// genericity failure).

#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "knotstrata/io.hpp"
#include "knotstrata/scenarios.hpp"

namespace knotstrata {
namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  static int counter = 0;
  return ::testing::TempDir() + "knotstrata_cli_" + std::to_string(getpid()) +
         "_" + std::to_string(counter++) + "_" + name;
}

CliResult run_cli(const std::string& args) {
  const std::string cli = KNOTSTRATA_CLI_PATH;
  CliResult result;
  const std::string err_path = temp_path("stderr.txt");
  const std::string cmd = cli + " " + args + " 2>" + err_path;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    ADD_FAILURE() << "popen failed for: " << cmd;
    return {};
  }
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, got);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.err = slurp(err_path);
  std::remove(err_path.c_str());
  return result;
}

TEST(Cli, HelpExitsZero) {
  const CliResult r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eval-cocycle"), std::string::npos);
}

TEST(Cli, VerifyChainsComplexityOne) {
  const CliResult r = run_cli("verify-chains --p 1");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d^2=0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("boundary(chord)=star"), std::string::npos) << r.out;
}

TEST(Cli, VerifyChainsAllComplexities) {
  const CliResult r = run_cli("verify-chains");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("p=1:"), std::string::npos);
  EXPECT_NE(r.out.find("p=2:"), std::string::npos);
  EXPECT_NE(r.out.find("p=3:"), std::string::npos);
  EXPECT_NE(r.out.find("principal_cycles=ok"), std::string::npos) << r.out;
}

TEST(Cli, EvalInvariantOnTrefoilCode) {
  const std::string gauss = temp_path("trefoil.gauss");
  io::write_text_file(gauss, "O1+ U2+ O3+ U1+ O2+ U3+\n");
  const CliResult r = run_cli("eval-invariant --formula v2 --gauss " + gauss);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n");
  const CliResult r3 = run_cli("eval-invariant --formula v3 --gauss " + gauss);
  EXPECT_EQ(r3.code, 0) << r3.err;
  EXPECT_EQ(r3.out, "1\n");
  std::remove(gauss.c_str());
}

TEST(Cli, EvalInvariantFromFormulaFile) {
  const std::string gauss = temp_path("unknot.gauss");
  io::write_text_file(gauss, "O1+ U2- O2- U1+\n");  // two cancelling kinks
  const std::string formula = temp_path("custom.formula");
  io::write_text_file(formula, "D[1>3, 4>2]\n");
  const CliResult r =
      run_cli("eval-invariant --formula " + formula + " --gauss " + gauss);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0\n");
  std::remove(gauss.c_str());
  std::remove(formula.c_str());
}

TEST(Cli, DiagramExtractFindsSixVisits) {
  const std::string curve_path = temp_path("trefoil.curve.json");
  io::write_text_file(
      curve_path, io::curve_to_json(fixture_compact_trefoil()).dump() + "\n");
  const CliResult r = run_cli("diagram extract --curve " + curve_path);
  EXPECT_EQ(r.code, 0) << r.err;
  int visits = 0;
  for (char c : r.out)
    if (c == 'O' || c == 'U') ++visits;
  EXPECT_EQ(visits, 6) << r.out;
  std::remove(curve_path.c_str());
}

TEST(Cli, ScenarioRunWritesAFamilyFile) {
  const std::string out_path = temp_path("family.json");
  const CliResult r = run_cli("scenario run great_circles --out " + out_path);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("sha256="), std::string::npos) << r.err;
  const io::json family = io::json::parse(slurp(out_path));
  EXPECT_EQ(family.at("scenario").get<std::string>(), "great_circles");
  std::remove(out_path.c_str());
}

TEST(Cli, UnknownScenarioExitsOne) {
  const CliResult r = run_cli("scenario run definitely_not_a_scenario");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("input error"), std::string::npos) << r.err;
}

TEST(Cli, MissingInputFileExitsOne) {
  const CliResult r =
      run_cli("eval-invariant --formula v2 --gauss /nonexistent/path.gauss");
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, DegenerateGeometryExitsTwo) {
  // A curve whose projection has a genuine triple point.
  std::vector<double> ts;
  std::vector<Vec> pts;
  for (int i = 0; i < 96; ++i) {
    const double th = 2.0 * M_PI * i / 96;
    Vec p(3);
    p << 0.3 * std::sin(th + 0.4), std::cos(th) + std::cos(2.0 * th),
        std::sin(th) - std::sin(2.0 * th);
    ts.push_back(th);
    pts.push_back(p);
  }
  Mat m(96, 3);
  for (int i = 0; i < 96; ++i) m.row(i) = pts[i].transpose();
  const ParamCurve bad = ParamCurve::make_compact(3, ts, m);
  const std::string curve_path = temp_path("triple.curve.json");
  io::write_text_file(curve_path, io::curve_to_json(bad).dump() + "\n");
  const CliResult r = run_cli("diagram extract --curve " + curve_path);
  EXPECT_EQ(r.code, 2) << r.err;
  std::remove(curve_path.c_str());
}

TEST(Cli, NoSubcommandIsAnInputError) {
  const CliResult r = run_cli("");
  EXPECT_EQ(r.code, 1);
}

// --- serialization round trips ----------------------------------------------

TEST(Io, Sha256KnownAnswers) {
  EXPECT_EQ(io::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(io::sha256_hex(std::string(1000, 'x')),
            io::sha256_hex(std::string(1000, 'x')));
}

TEST(Io, CurveJsonRoundTrip) {
  for (const char* name : {"trefoil", "long-trefoil"}) {
    const ParamCurve orig = fixture_by_name(name);
    const ParamCurve back = io::curve_from_json(io::curve_to_json(orig));
    EXPECT_EQ(back.kind(), orig.kind());
    EXPECT_EQ(back.n(), orig.n());
    ASSERT_EQ(back.sample_params().size(), orig.sample_params().size());
    EXPECT_LT(
        (back.sample_points() - orig.sample_points()).cwiseAbs().maxCoeff(),
        1e-15);
  }
}

TEST(Io, ConfigJsonRoundTrip) {
  RunConfig cfg;
  cfg.newton_tol = 3e-11;
  cfg.frames = 512;
  cfg.threads = 4;
  cfg.seed = 99;
  const RunConfig back = io::config_from_json(io::config_to_json(cfg));
  EXPECT_EQ(back.newton_tol, cfg.newton_tol);
  EXPECT_EQ(back.frames, cfg.frames);
  EXPECT_EQ(back.threads, cfg.threads);
  EXPECT_EQ(back.seed, cfg.seed);
}

TEST(Io, FamilyJsonAcceptsFramesForm) {
  // A frames-form family: three rotations of the trefoil, interpolated over
  // the circle.
  io::json j;
  j["domain"] = "circle";
  j["grid"] = {16};
  io::json frames = io::json::array();
  for (double angle : {0.0, 0.4, -0.2}) {
    const KnotCycle rot =
        rotation_wobble_loop(fixture_compact_trefoil(), angle, M_PI / 2.0);
    frames.push_back(io::curve_to_json(rot.frame(Vec::Constant(1, 0.0))));
  }
  j["frames"] = frames;
  const KnotCycle family = io::family_from_json(j);
  EXPECT_EQ(family.domain().kind, DomainKind::kCircle);
  const ParamCurve f0 = family.frame(Vec::Constant(1, 0.0));
  EXPECT_EQ(f0.n(), 3);
  EXPECT_EQ(f0.kind(), CurveKind::kCompact);
}

TEST(Io, UnknownFamilyShapeIsAnInputError) {
  io::json j;
  j["unexpected"] = true;
  EXPECT_THROW(io::family_from_json(j), InputError);
}

}  // namespace
}  // namespace knotstrata
