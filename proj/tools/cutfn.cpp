#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutfn/construct.hpp"
#include "cutfn/error.hpp"
#include "cutfn/json_io.hpp"
#include "cutfn/limit.hpp"
#include "cutfn/pwl.hpp"
#include "cutfn/verify.hpp"

namespace {

using cutfn::dump_json;
using cutfn::EpsilonSchedule;
using cutfn::PwlFunction;
using cutfn::Rational;

Rational parse_rational(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const cutfn::Error& e) {
    throw cutfn::Error(flag + ": " + e.what());
  }
}

std::vector<Rational> parse_rational_list(const std::string& text,
                                          const std::string& flag) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_rational(text.substr(start, end - start), flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct ScheduleFlags {
  std::string file;
  std::string alpha;
  std::vector<std::string> geometric;
  std::string epsilons;
};

void add_schedule_flags(CLI::App* cmd, ScheduleFlags& s) {
  auto* file =
      cmd->add_option("--schedule", s.file, "Schedule as a JSON file");
  auto* alpha =
      cmd->add_option("--alpha", s.alpha, "Schedule pole alpha, as p/q");
  auto* geom = cmd->add_option("--geometric", s.geometric,
                               "Geometric schedule: BASE RATIO")
                   ->expected(2);
  auto* eps = cmd->add_option("--epsilons", s.epsilons,
                              "Explicit schedule: comma-separated p/q list");
  file->excludes(alpha)->excludes(geom)->excludes(eps);
  geom->needs(alpha)->excludes(eps);
  eps->needs(alpha);
}

EpsilonSchedule make_schedule(const ScheduleFlags& s) {
  if (!s.file.empty()) return cutfn::load_schedule(s.file);
  if (s.alpha.empty())
    throw cutfn::Error(
        "no schedule given: pass --schedule FILE or --alpha with "
        "--geometric/--epsilons");
  Rational alpha = parse_rational(s.alpha, "--alpha");
  if (!s.geometric.empty())
    return EpsilonSchedule::geometric(
        alpha, parse_rational(s.geometric[0], "--geometric BASE"),
        parse_rational(s.geometric[1], "--geometric RATIO"));
  if (!s.epsilons.empty())
    return EpsilonSchedule::explicit_list(
        alpha, parse_rational_list(s.epsilons, "--epsilons"));
  throw cutfn::Error("--alpha needs --geometric or --epsilons");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    cutfn::write_text(out, text);
}

void require_depth_policy(std::size_t depth) {
  if (depth > cutfn::kDefaultDepthPolicy)
    throw cutfn::Error("depth " + std::to_string(depth) +
                       " exceeds the construction policy cap " +
                       std::to_string(cutfn::kDefaultDepthPolicy));
}

unsigned env_threads() {
  const char* env = std::getenv("CUTFN_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0')
    throw cutfn::Error(std::string("CUTFN_THREADS is not a number: ") + env);
  return static_cast<unsigned>(v);
}

int run(int argc, char** argv) {
  CLI::App app{"Exact construction and verification of two-slope cutting "
               "plane functions and their limit"};
  app.require_subcommand(1);

  std::string out;

  // construct
  auto* construct = app.add_subcommand(
      "construct", "Build psi_depth for a schedule and emit it as JSON");
  construct->add_option("--out", out, "Output file (default: stdout)");
  ScheduleFlags construct_sched;
  add_schedule_flags(construct, construct_sched);
  std::size_t construct_depth = 0;
  construct->add_option("--depth", construct_depth, "Construction depth")
      ->required();

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Check a property of a piecewise linear function");
  verify->add_option("--out", out, "Output file (default: stdout)");
  std::string verify_function, verify_property, verify_fpoint;
  unsigned witness_cap = 64, threads = env_threads();
  bool force_generic = false;
  verify->add_option("--function", verify_function, "Function JSON file")
      ->required();
  verify
      ->add_option("--property", verify_property,
                   "One of: subadditive, symmetric, minimal, two-slope-facet, "
                   "valid")
      ->required();
  verify->add_option("-f,--f", verify_fpoint,
                     "Symmetry point f, as p/q (needed by every property "
                     "except subadditive)");
  verify->add_option("--witness-cap", witness_cap,
                     "Maximum witnesses kept per report")
      ->capture_default_str();
  verify->add_option("--threads", threads,
                     "Worker threads for the vertex scan (0 = all cores; "
                     "default from CUTFN_THREADS)");
  verify->add_flag("--generic", force_generic,
                   "Skip the machine-word fast path of the vertex scan");

  // eval
  auto* eval = app.add_subcommand(
      "eval", "Evaluate a function at a point (periodically extended)");
  eval->add_option("--out", out, "Output file (default: stdout)");
  std::string eval_function, eval_x;
  eval->add_option("--function", eval_function, "Function JSON file")
      ->required();
  eval->add_option("-x,--x", eval_x, "Point, as p/q")->required();

  // limit
  auto* limit = app.add_subcommand(
      "limit", "Evaluate the limit function of a schedule at a point");
  limit->add_option("--out", out, "Output file (default: stdout)");
  ScheduleFlags limit_sched;
  add_schedule_flags(limit, limit_sched);
  std::string limit_x, limit_tol;
  limit->add_option("-x,--x", limit_x, "Point, as p/q")->required();
  limit->add_option("--tol", limit_tol, "Enclosure width tolerance, as p/q")
      ->required();

  // evidence
  auto* evidence = app.add_subcommand(
      "evidence", "Structural and limit evidence reports for a schedule");
  evidence->add_option("--out", out, "Output file (default: stdout)");
  ScheduleFlags evidence_sched;
  add_schedule_flags(evidence, evidence_sched);
  std::string evidence_kind, evidence_function, evidence_probes;
  std::size_t evidence_depth = 0;
  evidence
      ->add_option("--kind", evidence_kind,
                   "One of: structure, recursion, non-pwl, facet")
      ->required();
  evidence->add_option("--depth", evidence_depth, "Depth of the report")
      ->required();
  evidence->add_option("--function", evidence_function,
                       "Function JSON file to check instead of building "
                       "psi_depth (structure only)");
  evidence->add_option("--probes", evidence_probes,
                       "Comma-separated probe points for facet evidence");

  // export
  auto* exp = app.add_subcommand(
      "export", "Sample a function on a uniform grid and emit CSV");
  exp->add_option("--out", out, "Output file (default: stdout)");
  ScheduleFlags export_sched;
  add_schedule_flags(exp, export_sched);
  std::string export_function;
  std::size_t export_depth = 0, resolution = 256;
  unsigned digits = 12;
  exp->add_option("--function", export_function,
                  "Function JSON file (otherwise psi_depth is built)");
  auto* exp_depth = exp->add_option("--depth", export_depth,
                                    "Construction depth when building");
  exp->add_option("--resolution", resolution, "Grid steps over [0, 1]")
      ->capture_default_str();
  exp->add_option("--digits", digits, "Decimal digits per CSV value")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (construct->parsed()) {
    require_depth_policy(construct_depth);
    PwlFunction f = build(make_schedule(construct_sched), construct_depth);
    emit(out, dump_json(function_to_json(f)));
    return 0;
  }

  if (verify->parsed()) {
    PwlFunction f = cutfn::load_function(verify_function);
    cutfn::CheckOptions opts;
    opts.witness_cap = witness_cap;
    opts.threads = threads;
    opts.force_generic = force_generic;
    auto fpoint = [&]() -> Rational {
      if (verify_fpoint.empty())
        throw cutfn::Error("property '" + verify_property + "' needs --f");
      return parse_rational(verify_fpoint, "--f");
    };
    cutfn::VerificationReport r;
    if (verify_property == "subadditive")
      r = check_subadditive(f, opts);
    else if (verify_property == "symmetric")
      r = check_symmetric(f, fpoint(), opts);
    else if (verify_property == "minimal")
      r = check_minimal(f, fpoint(), opts);
    else if (verify_property == "two-slope-facet")
      r = check_two_slope_facet(f, fpoint(), opts);
    else if (verify_property == "valid")
      r = check_valid(f, fpoint(), opts);
    else
      throw cutfn::Error("unknown property '" + verify_property + "'");
    emit(out, dump_json(report_to_json(r)));
    return r.holds ? 0 : 1;
  }

  if (eval->parsed()) {
    PwlFunction f = cutfn::load_function(eval_function);
    Rational x = parse_rational(eval_x, "--x").mod1();
    cutfn::ojson j;
    j["point"] = x.str();
    j["value"] = f.eval(x).str();
    emit(out, dump_json(j));
    return 0;
  }

  if (limit->parsed()) {
    EpsilonSchedule sched = make_schedule(limit_sched);
    Rational x = parse_rational(limit_x, "--x");
    Rational tol = parse_rational(limit_tol, "--tol");
    cutfn::LimitEvaluation ev = eval_limit(sched, x, tol);
    emit(out, dump_json(evaluation_to_json(ev)));
    return 0;
  }

  if (evidence->parsed()) {
    EpsilonSchedule sched = make_schedule(evidence_sched);
    cutfn::VerificationReport r;
    if (evidence_kind == "structure") {
      require_depth_policy(evidence_depth);
      PwlFunction f = evidence_function.empty()
                          ? build(sched, evidence_depth)
                          : cutfn::load_function(evidence_function);
      r = structure_report(f, sched, evidence_depth);
    } else if (evidence_kind == "recursion") {
      require_depth_policy(evidence_depth);
      r = verify_recursive_decomposition(sched, evidence_depth);
    } else if (evidence_kind == "non-pwl") {
      r = non_pwl_evidence(sched, evidence_depth);
    } else if (evidence_kind == "facet") {
      std::vector<Rational> probes;
      if (!evidence_probes.empty())
        probes = parse_rational_list(evidence_probes, "--probes");
      r = facet_evidence(sched, evidence_depth, probes);
    } else {
      throw cutfn::Error("unknown evidence kind '" + evidence_kind + "'");
    }
    emit(out, dump_json(report_to_json(r)));
    return r.holds ? 0 : 1;
  }

  if (exp->parsed()) {
    PwlFunction f = [&] {
      if (!export_function.empty())
        return cutfn::load_function(export_function);
      if (!*exp_depth)
        throw cutfn::Error("export needs --function or a schedule with "
                           "--depth");
      require_depth_policy(export_depth);
      return build(make_schedule(export_sched), export_depth);
    }();
    if (resolution == 0)
      throw cutfn::Error("--resolution must be positive");
    std::string csv = "x,y\n";
    for (std::size_t k = 0; k <= resolution; ++k) {
      Rational x(static_cast<long>(k), static_cast<long>(resolution));
      csv += x.decimal(digits) + "," + f.eval(x).decimal(digits) + "\n";
    }
    emit(out, csv);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cutfn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
