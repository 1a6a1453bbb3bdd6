// knotstrata command-line interface.
//
// Exit codes: 0 success, 1 input/verification error, 2 geometric genericity
// failure at the configured tolerances.

#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotstrata/acceptance.hpp"
#include "knotstrata/chord.hpp"
#include "knotstrata/cocycle.hpp"
#include "knotstrata/gauss.hpp"
#include "knotstrata/io.hpp"
#include "knotstrata/scenarios.hpp"

namespace {

using knotstrata::EvalResult;
using knotstrata::RunConfig;
namespace io = knotstrata::io;

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--newton-tol", cfg.newton_tol, "Newton residual tolerance");
  cmd->add_option("--dedup-radius", cfg.dedup_radius,
                  "root deduplication radius");
  cmd->add_option("--margin-tol", cfg.margin_tol,
                  "strict-inequality tie threshold");
  cmd->add_option("--cond-threshold", cfg.cond_threshold,
                  "Jacobian condition limit");
  cmd->add_option("--max-newton-iter", cfg.max_newton_iter,
                  "Newton iteration cap");
  cmd->add_option("--threads", cfg.threads,
                  "worker threads (0 = KNOTSTRATA_THREADS or hardware)");
  cmd->add_option("--frames", cfg.frames,
                  "frame count for tracking (0 = family hint)");
  cmd->add_option("--seed", cfg.seed, "RNG seed for perturbation tests");
}

std::string human_summary(const EvalResult& result, bool mod2_total) {
  std::ostringstream line;
  if (mod2_total)
    line << "total_mod2=" << result.total_mod2;
  else
    line << "|value|=" << std::abs(result.total_signed);
  line << " (";
  bool first = true;
  for (const auto& [name, parity] : result.stratum_mod2) {
    (void)parity;
    if (!first) line << ", ";
    first = false;
    int n_events = 0;
    for (const auto& e : result.events)
      if (e.stratum == name) n_events += e.multiplicity;
    line << name << "=" << n_events;
  }
  line << ")";
  return line.str();
}

int cmd_eval_cocycle(const std::string& cls, const std::string& family_path,
                     const RunConfig& cfg, const std::string& out_path,
                     const std::string& events_path,
                     const std::string& csv_path) {
  const std::string family_text = io::read_text_file(family_path);
  const std::string input_hash = io::sha256_hex(family_text);
  std::string description;
  knotstrata::KnotCycle cycle =
      io::family_from_json(io::json::parse(family_text), &description);
  EvalResult result;
  if (cls == "tt") {
    result = knotstrata::evaluate_tt(cycle, cfg);
  } else if (cls == "A" || cls == "B" || cls == "C" || cls == "D") {
    result = knotstrata::evaluate_compact(cycle, cls, cfg);
  } else {
    throw knotstrata::InputError("--class must be tt, A, B, C, or D");
  }
  if (result.family.empty()) result.family = description;
  std::cout << human_summary(result, cls == "tt") << "\n";
  if (!out_path.empty())
    io::write_text_file(out_path,
                        io::result_to_json(result, input_hash).dump(2) + "\n");
  if (!events_path.empty())
    io::write_text_file(events_path, io::event_log_lines(result));
  if (!csv_path.empty())
    io::write_text_file(csv_path, io::csv_summary(result));
  return 0;
}

int cmd_eval_invariant(const std::string& formula_arg,
                       const std::string& gauss_path,
                       const std::string& kind_name) {
  knotstrata::ArrowFormula formula;
  bool named = false;
  for (const std::string& name : knotstrata::formula_names()) {
    if (formula_arg == name) {
      formula = knotstrata::formula_by_name(name);
      named = true;
      break;
    }
  }
  if (!named) {
    formula = knotstrata::ArrowFormula::parse(
        io::read_text_file(formula_arg), formula_arg,
        knotstrata::CurveKind::kLong);
  }
  const knotstrata::CurveKind kind = kind_name == "long"
                                         ? knotstrata::CurveKind::kLong
                                         : knotstrata::CurveKind::kCompact;
  const knotstrata::KnotDiagram dia =
      knotstrata::KnotDiagram::parse(io::read_text_file(gauss_path), kind);
  const knotstrata::Rational value = knotstrata::evaluate_formula(formula, dia);
  if (value.denominator() == 1)
    std::cout << value.numerator() << "\n";
  else
    std::cout << value.numerator() << "/" << value.denominator() << "\n";
  return 0;
}

int cmd_diagram_extract(const std::string& curve_path) {
  const knotstrata::ParamCurve curve =
      io::curve_from_json(io::json::parse(io::read_text_file(curve_path)));
  const knotstrata::KnotDiagram dia = knotstrata::project_to_diagram(curve);
  std::cout << dia.to_string() << "\n";
  return 0;
}

int cmd_verify_chains(int p_only) {
  using knotstrata::ChordComplex;
  bool all_ok = true;
  for (int p = 1; p <= 3; ++p) {
    if (p_only != 0 && p != p_only) continue;
    ChordComplex complex(p);
    int n_cells = 0;
    for (int degree : complex.degrees())
      n_cells += static_cast<int>(complex.cells(degree).size());
    bool ok = complex.d_squared_zero();
    std::ostringstream line;
    line << "p=" << p << ": cells=" << n_cells
         << " d^2=" << (ok ? "0" : "NONZERO");
    line << " homology={";
    bool first = true;
    for (const auto& [degree, rank] : complex.homology_ranks()) {
      if (rank == 0) continue;
      if (!first) line << ", ";
      first = false;
      line << "deg " << degree << ": " << rank;
    }
    if (first) line << "0";
    line << "}";
    if (p == 1) {
      // One chord on a two-point group: its boundary is the starred point.
      const knotstrata::GCDCell chord = knotstrata::GCDCell::parse("a a ; 1-2");
      const auto boundary = chord.boundary();
      const bool chord_ok = boundary.size() == 1 &&
                            boundary[0].to_string() ==
                                knotstrata::GCDCell::parse(".*").to_string();
      ok = ok && chord_ok;
      line << " boundary(chord)=" << (chord_ok ? "star" : "UNEXPECTED");
    }
    if (p == 3) {
      const bool even_ok =
          knotstrata::verify_cycle(knotstrata::principal_part_even());
      const bool odd_ok =
          knotstrata::verify_cycle(knotstrata::principal_part_odd());
      ok = ok && even_ok && odd_ok;
      line << " principal_cycles=" << (even_ok && odd_ok ? "ok" : "FAIL");
    }
    std::cout << line.str() << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_scenario_run(const std::string& name, int frames,
                     const std::string& out_path) {
  io::json params;
  if (frames > 0) params["frames"] = frames;
  const io::json family = io::scenario_family_json(name, params);
  const std::string text = family.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    io::write_text_file(out_path, text);
  std::cerr << "scenario " << name << " sha256="
            << io::sha256_hex(text).substr(0, 12) << "\n";
  return 0;
}

int cmd_selftest(const RunConfig& cfg) {
  const auto results = knotstrata::run_acceptance(std::cout, cfg);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation of combinatorial cohomology classes on families "
               "of knots"};
  app.require_subcommand(1);

  RunConfig cfg;

  std::string cls, family_path, out_path, events_path, csv_path;
  CLI::App* eval_cocycle =
      app.add_subcommand("eval-cocycle", "evaluate a class on a family");
  eval_cocycle->add_option("--class", cls, "tt, A, B, C, or D")->required();
  eval_cocycle->add_option("--family", family_path, "family JSON path")
      ->required();
  eval_cocycle->add_option("--n", cfg.frames,
                           "frame count override (alias of --frames)");
  eval_cocycle->add_option("--out", out_path, "result JSON path");
  eval_cocycle->add_option("--events", events_path, "event log path (JSONL)");
  eval_cocycle->add_option("--csv", csv_path, "CSV summary path");
  add_config_flags(eval_cocycle, cfg);

  std::string formula_arg, gauss_path, diagram_kind = "compact";
  CLI::App* eval_invariant = app.add_subcommand(
      "eval-invariant", "evaluate an arrow formula on a Gauss code");
  eval_invariant->add_option("--formula", formula_arg, "formula name or file")
      ->required();
  eval_invariant->add_option("--gauss", gauss_path, "Gauss code file")
      ->required();
  eval_invariant->add_option("--kind", diagram_kind, "long or compact");

  std::string curve_path;
  CLI::App* diagram = app.add_subcommand("diagram", "diagram utilities");
  CLI::App* extract =
      diagram->add_subcommand("extract", "project a curve to its Gauss code");
  extract->add_option("--curve", curve_path, "curve JSON path")->required();

  int p_only = 0;
  CLI::App* verify_chains = app.add_subcommand(
      "verify-chains", "chain-complex verification for p <= 3");
  verify_chains->add_option("--p", p_only, "restrict to one complexity")
      ->check(CLI::Range(1, 3));

  std::string scenario_name, scenario_out;
  int scenario_frames = 0;
  CLI::App* scenario = app.add_subcommand("scenario", "scenario utilities");
  CLI::App* scenario_run =
      scenario->add_subcommand("run", "materialize a named family");
  scenario_run->add_option("name", scenario_name, "scenario name")->required();
  scenario_run->add_option("--frames", scenario_frames, "frame count");
  scenario_run->add_option("--out", scenario_out, "output JSON path");

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the acceptance suite");
  add_config_flags(selftest, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // fold CLI11 parse-error codes into "input error"
  }

  try {
    if (eval_cocycle->parsed())
      return cmd_eval_cocycle(cls, family_path, cfg, out_path, events_path,
                              csv_path);
    if (eval_invariant->parsed())
      return cmd_eval_invariant(formula_arg, gauss_path, diagram_kind);
    if (diagram->parsed() && extract->parsed())
      return cmd_diagram_extract(curve_path);
    if (verify_chains->parsed()) return cmd_verify_chains(p_only);
    if (scenario->parsed() && scenario_run->parsed())
      return cmd_scenario_run(scenario_name, scenario_frames, scenario_out);
    if (selftest->parsed()) return cmd_selftest(cfg);
  } catch (const knotstrata::GenericityError& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return 2;
  } catch (const knotstrata::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "no subcommand\n";
  return 1;
}
