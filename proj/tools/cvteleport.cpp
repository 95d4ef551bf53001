// cvteleport: channel classification, steering-limited optimal teleportation,
// resource construction, Monte Carlo verification and figure-data export.
//
// Exit codes: 0 success, 2 validation error, 3 divergent energy, 4 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvtele/contour.hpp"
#include "cvtele/fidelity.hpp"
#include "cvtele/montecarlo.hpp"

namespace {

using nlohmann::json;
using namespace cvtele;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergent = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json envelope(const std::string& command, json params, json data) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}, {"params", std::move(params)},
              {"data", std::move(data)}};
}

json num(double x) { return json_number(x); }

std::string yes_no(bool v) { return v ? "yes" : "no"; }

Direction parse_direction(const std::string& s) {
  if (s == "ba") return Direction::BtoA;
  if (s == "ab") return Direction::AtoB;
  throw Error(Errc::InvalidArgument, "direction must be 'ba' or 'ab'");
}

const char* direction_name(Direction d) { return d == Direction::BtoA ? "ba" : "ab"; }

json resource_json(const ResourceSpec<double>& r) {
  const auto check = verify_resource(r);
  const auto ch = r.channel();
  return json{{"a", num(r.a)},
              {"b", num(r.b)},
              {"c", num(r.c)},
              {"g", num(r.g)},
              {"direction", direction_name(r.direction)},
              {"steering_budget", num(r.steering_budget)},
              {"energy", num(r.energy)},
              {"cross_steerability", num(cross_steerability(r))},
              {"induced_channel", {{"tau", num(ch.tau())}, {"y", num(ch.y())}}},
              {"checks",
               {{"physical", check.physical},
                {"nu_minus", num(check.nu_minus)},
                {"steering", num(check.steering)},
                {"cross_measured", num(check.cross_measured)},
                {"boundary_residual", num(check.boundary_residual)},
                {"ok", check.ok}}}};
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CVTELEPORT_SEED")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::InvalidArgument, "CVTELEPORT_SEED must be an unsigned integer");
  }
  return 1;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---- subcommands -----------------------------------------------------------

struct ClassifyOpts {
  double tau = 0, y = 0;
  std::string format = "text";
};

int run_classify(const ClassifyOpts& o) {
  const ChannelClass c = classify(o.tau, o.y);
  if (o.format == "json") {
    emit(envelope("classify", {{"tau", num(o.tau)}, {"y", num(o.y)}},
                  {{"unphysical", c.unphysical},
                   {"entanglement_breaking", c.entanglement_breaking},
                   {"sb_b_to_a", c.sb_b_to_a},
                   {"sb_a_to_b", c.sb_a_to_b},
                   {"tag", c.unphysical ? "unphysical" : to_string(c.tag)}}));
    return kExitOk;
  }
  std::cout << "tau = " << format_number(o.tau) << ", y = " << format_number(o.y) << '\n'
            << "physical: " << yes_no(!c.unphysical) << '\n';
  if (!c.unphysical) {
    std::cout << "tag: " << to_string(c.tag) << '\n'
              << "entanglement_breaking: " << yes_no(c.entanglement_breaking) << '\n'
              << "sb_b_to_a: " << yes_no(c.sb_b_to_a) << '\n'
              << "sb_a_to_b: " << yes_no(c.sb_a_to_b) << '\n';
  }
  return kExitOk;
}

struct OptimalOpts {
  double lambda = 0, steering = 0;
  std::string direction = "ba";
  std::string format = "json";
};

int run_optimal(const OptimalOpts& o) {
  const Direction dir = parse_direction(o.direction);
  const double t = tau_opt(o.lambda, o.steering, dir);
  const double y = boundary_noise(t, o.steering, dir);
  const double f = f_opt(o.lambda, o.steering, dir);
  const double thr = no_cloning_threshold(o.lambda);
  const bool clamp = clamp_branch_active(o.lambda, o.steering, dir);
  json params{{"lambda", num(o.lambda)}, {"steering", num(o.steering)}, {"direction", o.direction}};
  json data{{"tau_opt", num(t)},       {"y_boundary", num(y)},   {"f_opt", num(f)},
            {"threshold", num(thr)},   {"secure", exceeds_threshold(f, thr)}, {"clamp_branch", clamp}};
  if (dir == Direction::AtoB) data["s_ab_min"] = num(s_ab_min(o.lambda));

  if (o.steering > 0) {
    ResourceSpec<double> r;
    try {
      r = optimal_resource(dir, t, o.steering);
    } catch (const Error& e) {
      if (e.code() != Errc::DivergentEnergy) throw;
      json err{{"code", "DivergentEnergy"},
               {"message", "optimal channel is a quantum-limited endpoint; the minimal-energy resource diverges"},
               {"tau_opt", num(t)},
               {"f_opt", num(f)}};
      if (o.format == "json") {
        emit(json{{"schema_version", kSchemaVersion}, {"command", "optimal"}, {"params", params}, {"error", err}});
      }
      std::cerr << "error: " << err["message"].get<std::string>() << '\n';
      return kExitDivergent;
    }
    const auto check = verify_resource(r);
    if (!check.ok) throw Error(Errc::UnphysicalResource, "constructed resource failed its invariant checks");
    data["resource"] = resource_json(r);
    data["cross_steerability"] = num(cross_steerability(r));
  } else {
    data["resource"] = nullptr;
    data["cross_steerability"] = nullptr;
    data["resource_note"] = "zero budget: no resource family is defined";
  }

  if (o.format == "json") {
    emit(envelope("optimal", params, data));
  } else {
    std::cout << "tau_opt: " << format_number(t) << "\ny_boundary: " << format_number(y)
              << "\nf_opt: " << format_number(f) << "\nthreshold: " << format_number(thr)
              << "\nsecure: " << yes_no(exceeds_threshold(f, thr)) << '\n';
    if (!data["resource"].is_null()) {
      const auto& r = data["resource"];
      std::cout << "resource: a=" << r["a"].dump() << " b=" << r["b"].dump() << " c=" << r["c"].dump()
                << " g=" << r["g"].dump() << " energy=" << r["energy"].dump() << '\n';
    }
  }
  return kExitOk;
}

struct ResourceOpts {
  double tau = 0, steering = 0;
  std::string direction = "ba";
  std::optional<double> a;
  std::string format = "json";
};

int run_resource(const ResourceOpts& o) {
  const Direction dir = parse_direction(o.direction);
  const auto r = o.a ? family_member(dir, o.tau, o.steering, *o.a) : optimal_resource(dir, o.tau, o.steering);
  json params{{"tau", num(o.tau)}, {"steering", num(o.steering)}, {"direction", o.direction}};
  if (o.a) params["a"] = num(*o.a);
  const json data = resource_json(r);
  if (o.format == "json") {
    emit(envelope("resource", params, data));
  } else {
    std::cout << "a: " << data["a"].dump() << "\nb: " << data["b"].dump() << "\nc: " << data["c"].dump()
              << "\ng: " << data["g"].dump() << "\nenergy: " << data["energy"].dump()
              << "\ncross_steerability: " << data["cross_steerability"].dump() << '\n';
  }
  return kExitOk;
}

struct ThresholdOpts {
  double lambda = 0;
  std::string format = "text";
};

int run_threshold(const ThresholdOpts& o) {
  const double thr = no_cloning_threshold(o.lambda);
  const double smin = s_ab_min(o.lambda);
  if (o.format == "json") {
    emit(envelope("threshold", {{"lambda", num(o.lambda)}}, {{"threshold", num(thr)}, {"s_ab_min", num(smin)}}));
  } else {
    std::cout << "threshold: " << format_number(thr) << "\ns_ab_min: " << format_number(smin) << '\n';
  }
  return kExitOk;
}

struct VerifyOpts {
  double tau = 0, y = 0, lambda = 0;
  std::int64_t n = 100000;
  std::optional<std::uint64_t> seed;
  std::optional<double> s_ba, s_ab;
  unsigned workers = 1;
  std::string format = "json";
};

int run_verify(const VerifyOpts& o) {
  const std::uint64_t seed = resolve_seed(o.seed);
  SteeringBudget<double> budget;
  if (o.s_ba) budget.s_ba = *o.s_ba;
  if (o.s_ab) budget.s_ab = *o.s_ab;
  auto report = security_report(o.tau, o.y, o.lambda, budget);
  const McEstimate mc = mc_channel_fidelity(o.tau, o.y, o.lambda, o.n, RngStream(seed), o.workers);
  const bool agrees = std::abs(mc.mean - report.f_avg) <= 4.0 * mc.std_error + 1e-12;
  report.mc = McSummary{mc.mean, mc.std_error, mc.n, mc.seed, agrees};

  json params{{"tau", num(o.tau)}, {"y", num(o.y)}, {"lambda", num(o.lambda)}, {"n", o.n}, {"seed", seed}};
  json data{{"f_avg", num(report.f_avg)},
            {"threshold", num(report.threshold)},
            {"secure", report.secure},
            {"channel", {{"tau", num(report.tau)}, {"y", num(report.y)}}},
            {"budget_used", {{"s_ba", num(budget.s_ba)}, {"s_ab", num(budget.s_ab)}}},
            {"accessible", report.accessible},
            {"mc",
             {{"estimate", num(mc.mean)},
              {"std_error", num(mc.std_error)},
              {"n_samples", mc.n},
              {"seed", mc.seed},
              {"rng", RngStream::kAlgorithm}}},
            {"agrees", agrees}};
  if (o.format == "json") {
    emit(envelope("verify", params, data));
  } else {
    std::cout << "f_avg: " << format_number(report.f_avg) << "\nmc: " << format_number(mc.mean) << " +- "
              << format_number(mc.std_error) << "\nagrees: " << yes_no(agrees) << '\n';
  }
  return kExitOk;
}

struct ContourOpts {
  std::string kind;
  std::optional<double> lambda, steering;
  std::optional<double> x_min, x_max, x_step, y_min, y_max, y_step, step;
  std::string out;
  std::string format = "csv";
};

int run_contour(const ContourOpts& o) {
  const auto kind = parse_figure_kind(o.kind);
  if (!kind) throw Error(Errc::InvalidArgument, "kind must be one of fig1a, fig1b, fig2a, fig2b");
  auto p = ContourParams::defaults(*kind);
  if (o.lambda) p.lambda = *o.lambda;
  if (o.steering) p.steering = *o.steering;
  if (o.step) p.x->step = p.y->step = *o.step;
  if (o.x_min) p.x->min = *o.x_min;
  if (o.x_max) p.x->max = *o.x_max;
  if (o.x_step) p.x->step = *o.x_step;
  if (o.y_min) p.y->min = *o.y_min;
  if (o.y_max) p.y->max = *o.y_max;
  if (o.y_step) p.y->step = *o.y_step;
  const ContourGrid grid = build_contour(p);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!o.out.empty() && o.out != "-") {
    file.open(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + o.out + "' for writing");
    os = &file;
  }
  if (o.format == "json") {
    *os << to_json(grid).dump() << '\n';
  } else {
    write_csv(grid, *os);
  }
  os->flush();
  if (!*os) throw IoError("failed writing contour output");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering-limited secure teleportation of coherent-state alphabets"};
  app.require_subcommand(1);
  const std::vector<std::string> text_json{"text", "json"};

  ClassifyOpts co;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a phase-insensitive channel (tau, y)");
  classify_cmd->add_option("--tau", co.tau, "Transmissivity / gain")->required();
  classify_cmd->add_option("--y", co.y, "Added noise")->required();
  classify_cmd->add_option("--format", co.format)->check(CLI::IsMember(text_json));

  OptimalOpts oo;
  auto* optimal_cmd = app.add_subcommand("optimal", "Optimal protocol at a fixed steering budget");
  optimal_cmd->add_option("--lambda", oo.lambda, "Alphabet inverse variance")->required();
  optimal_cmd->add_option("--steering", oo.steering, "Steering budget (natural log units)")->required();
  optimal_cmd->add_option("--direction", oo.direction, "ba or ab")->check(CLI::IsMember({"ba", "ab"}));
  optimal_cmd->add_option("--format", oo.format)->check(CLI::IsMember(text_json));

  ResourceOpts ro;
  auto* resource_cmd = app.add_subcommand("resource", "Construct a minimal-energy resource state");
  resource_cmd->add_option("--tau", ro.tau)->required();
  resource_cmd->add_option("--steering", ro.steering)->required();
  resource_cmd->add_option("--direction", ro.direction)->check(CLI::IsMember({"ba", "ab"}));
  resource_cmd->add_option("--a", ro.a, "Use this a instead of the minimal one");
  resource_cmd->add_option("--format", ro.format)->check(CLI::IsMember(text_json));

  ThresholdOpts to;
  auto* threshold_cmd = app.add_subcommand("threshold", "No-cloning threshold and minimal AtoB steering");
  threshold_cmd->add_option("--lambda", to.lambda)->required();
  threshold_cmd->add_option("--format", to.format)->check(CLI::IsMember(text_json));

  VerifyOpts vo;
  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo check of the average fidelity");
  verify_cmd->add_option("--tau", vo.tau)->required();
  verify_cmd->add_option("--y", vo.y)->required();
  verify_cmd->add_option("--lambda", vo.lambda)->required();
  verify_cmd->add_option("--n", vo.n, "Number of samples");
  verify_cmd->add_option("--seed", vo.seed, "Master seed (default: $CVTELEPORT_SEED or 1)");
  verify_cmd->add_option("--s-ba", vo.s_ba, "B->A steering budget for the accessibility verdict");
  verify_cmd->add_option("--s-ab", vo.s_ab, "A->B steering budget for the accessibility verdict");
  verify_cmd->add_option("--workers", vo.workers, "Worker threads (result is independent of this)");
  verify_cmd->add_option("--format", vo.format)->check(CLI::IsMember(text_json));

  ContourOpts qo;
  auto* contour_cmd = app.add_subcommand("contour", "Export figure data");
  contour_cmd->add_option("--kind", qo.kind, "fig1a | fig1b | fig2a | fig2b")->required();
  contour_cmd->add_option("--lambda", qo.lambda);
  contour_cmd->add_option("--steering", qo.steering);
  contour_cmd->add_option("--step", qo.step, "Grid step on both axes");
  contour_cmd->add_option("--x-min", qo.x_min);
  contour_cmd->add_option("--x-max", qo.x_max);
  contour_cmd->add_option("--x-step", qo.x_step);
  contour_cmd->add_option("--y-min", qo.y_min);
  contour_cmd->add_option("--y-max", qo.y_max);
  contour_cmd->add_option("--y-step", qo.y_step);
  contour_cmd->add_option("--out", qo.out, "Output path ('-' for stdout)");
  contour_cmd->add_option("--format", qo.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*classify_cmd) return run_classify(co);
    if (*optimal_cmd) return run_optimal(oo);
    if (*resource_cmd) return run_resource(ro);
    if (*threshold_cmd) return run_threshold(to);
    if (*verify_cmd) return run_verify(vo);
    if (*contour_cmd) return run_contour(qo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == Errc::DivergentEnergy) {
      std::cout << json{{"schema_version", kSchemaVersion}, {"error", {{"code", "DivergentEnergy"}, {"message", e.what()}}}}
                       .dump(2)
                << '\n';
      return kExitDivergent;
    }
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitValidation;
}
