#include "cvtele/contour.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace cvtele {

namespace {

constexpr double kCurveSmax = 8.0;
constexpr double kCurveStep = 0.01;

Direction panel_direction(FigureKind kind) {
  return kind == FigureKind::Fig1a || kind == FigureKind::Fig2a ? Direction::BtoA : Direction::AtoB;
}

bool is_fig1(FigureKind kind) { return kind == FigureKind::Fig1a || kind == FigureKind::Fig1b; }

void validate_axis(const Axis& a) {
  if (!(a.step > 0) || !(a.max >= a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
    throw Error(Errc::InvalidArgument, "axis '" + a.name + "' needs finite min <= max and step > 0");
  }
  if (a.count() > 5'000'000) throw Error(Errc::InvalidArgument, "axis '" + a.name + "' has too many points");
}

// Budget for the gray accessible-region mask: the fixed steerability plus the
// cross steerability of the optimal minimal-energy resource at that budget.
void fill_fig1_budget(ContourGrid& grid) {
  const auto& p = grid.params;
  const Direction dir = panel_direction(p.kind);
  const double inf = std::numeric_limits<double>::infinity();
  double cross = inf;
  if (p.steering > 0) {
    const double t = tau_opt(p.lambda, p.steering, dir);
    try {
      cross = cross_steerability(optimal_resource(dir, t, p.steering));
      grid.budget_note = "cross steerability of the minimal-energy optimal resource";
    } catch (const Error& e) {
      if (e.code() != Errc::DivergentEnergy) throw;
      cross = cross_steerability_limit(dir, t, p.steering);
      grid.budget_note = "optimum at a quantum-limited endpoint; cross steerability is the infinite-energy limit";
    }
  } else {
    grid.budget_note = "zero budget; cross steerability unconstrained";
  }
  if (dir == Direction::BtoA) {
    grid.budget = {p.steering, cross};
  } else {
    grid.budget = {cross, p.steering};
  }
}

void build_fig1(ContourGrid& grid) {
  const auto& p = grid.params;
  const Direction dir = panel_direction(p.kind);
  if (!(p.lambda > 0)) throw Error(Errc::NonPositiveLambda, "figure 1 panels need lambda > 0");
  if (!(p.steering >= 0)) throw Error(Errc::InvalidBudget, "steering must be non-negative");
  fill_fig1_budget(grid);
  const double threshold = no_cloning_threshold(p.lambda);

  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  grid.fig1.reserve(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const double tau = grid.x.at(i);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = grid.y.at(j);
      const ChannelClass cls = classify(tau, y);
      Fig1Cell cell{tau, y, std::nullopt, cls.unphysical, cls.entanglement_breaking, cls.sb_b_to_a, cls.sb_a_to_b,
                    false, false};
      if (!cls.unphysical) {
        const double f = avg_fidelity(tau, y, p.lambda);
        cell.f_avg = f;
        cell.accessible = accessible(tau, y, grid.budget);
        cell.secure = exceeds_threshold(f, threshold);
      }
      grid.fig1.push_back(cell);
    }
  }

  Overlay cp{"cp_boundary", {}};
  Overlay sb{dir == Direction::BtoA ? "sb_ba_boundary" : "sb_ab_boundary", {}};
  Overlay contour{"no_cloning_contour", {}};
  Overlay access{"accessible_boundary", {}};
  for (std::size_t i = 0; i < nx; ++i) {
    const double tau = grid.x.at(i);
    cp.points.push_back({tau, std::abs(1.0 - tau)});
    sb.points.push_back({tau, dir == Direction::BtoA ? 0.5 * (1.0 + std::abs(2.0 * tau - 1.0))
                                                     : std::max(std::abs(1.0 - tau), 1.0)});
    // avg_fidelity(tau, y) = threshold solved for y.
    const double gap = 1.0 - std::sqrt(tau);
    const double yc = 2.0 / threshold - 1.0 - tau - 2.0 * gap * gap / p.lambda;
    if (yc >= std::abs(1.0 - tau) - kTolerance) contour.points.push_back({tau, yc});
    access.points.push_back({tau, std::max(std::exp(-grid.budget.s_ba) * tau, std::exp(-grid.budget.s_ab))});
  }

  Overlay curve{"optimal_curve", {}};
  for (int k = 0; k * kCurveStep <= kCurveSmax + 1e-12; ++k) {
    const double s = k * kCurveStep;
    const double t = tau_opt(p.lambda, s, dir);
    curve.points.push_back({t, boundary_noise(t, s, dir), clamp_branch_active(p.lambda, s, dir)});
  }
  grid.overlays = {cp, sb, contour, access, curve};

  const double t_opt = tau_opt(p.lambda, p.steering, dir);
  grid.marked.push_back({"optimal_channel", t_opt, boundary_noise(t_opt, p.steering, dir)});
  const double s_edge = dir == Direction::BtoA ? 0.0 : s_ab_min(p.lambda);
  const double t_edge = tau_opt(p.lambda, s_edge, dir);
  grid.marked.push_back({"secure_boundary_channel", t_edge, boundary_noise(t_edge, s_edge, dir)});
}

void build_fig2(ContourGrid& grid) {
  const Direction dir = panel_direction(grid.params.kind);
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  grid.fig2.reserve(nx * ny);
  Overlay boundary{"secure_boundary", {}};
  for (std::size_t i = 0; i < nx; ++i) {
    const double lambda = grid.x.at(i);
    const double threshold = no_cloning_threshold(lambda);
    for (std::size_t j = 0; j < ny; ++j) {
      const double s = grid.y.at(j);
      const double f = f_opt(lambda, s, dir);
      grid.fig2.push_back({lambda, s, f, threshold, exceeds_threshold(f, threshold)});
    }
    boundary.points.push_back({lambda, dir == Direction::BtoA ? 0.0 : s_ab_min(lambda)});
  }
  grid.overlays = {boundary};
}

}  // namespace

std::optional<FigureKind> parse_figure_kind(const std::string& name) {
  if (name == "fig1a") return FigureKind::Fig1a;
  if (name == "fig1b") return FigureKind::Fig1b;
  if (name == "fig2a") return FigureKind::Fig2a;
  if (name == "fig2b") return FigureKind::Fig2b;
  return std::nullopt;
}

std::string to_string(FigureKind kind) {
  switch (kind) {
    case FigureKind::Fig1a: return "fig1a";
    case FigureKind::Fig1b: return "fig1b";
    case FigureKind::Fig2a: return "fig2a";
    case FigureKind::Fig2b: return "fig2b";
  }
  return "fig1a";
}

std::size_t Axis::count() const {
  if (!(step > 0) || max < min) return 0;
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

ContourParams ContourParams::defaults(FigureKind kind) {
  ContourParams p;
  p.kind = kind;
  p.lambda = 0.2;
  switch (kind) {
    case FigureKind::Fig1a:
      p.steering = 0.4;
      break;
    case FigureKind::Fig1b:
      p.steering = 0.6;
      break;
    case FigureKind::Fig2a:
    case FigureKind::Fig2b:
      p.steering = 0.0;
      break;
  }
  if (is_fig1(kind)) {
    p.x = Axis{"tau", 0.0, 2.0, 0.005};
    p.y = Axis{"y", 0.0, 2.0, 0.005};
  } else {
    p.x = Axis{"lambda", 0.005, 2.0, 0.005};
    p.y = Axis{"s", 0.0, 3.0, 0.005};
  }
  return p;
}

ContourGrid build_contour(const ContourParams& params) {
  ContourGrid grid;
  grid.params = params;
  const ContourParams d = ContourParams::defaults(params.kind);
  grid.x = params.x.value_or(*d.x);
  grid.y = params.y.value_or(*d.y);
  grid.x.name = d.x->name;
  grid.y.name = d.y->name;
  validate_axis(grid.x);
  validate_axis(grid.y);
  if (is_fig1(params.kind)) {
    if (grid.x.min < 0 || grid.y.min < 0) throw Error(Errc::NegativeParameter, "tau and y axes must be non-negative");
    build_fig1(grid);
  } else {
    if (!(grid.x.min > 0)) throw Error(Errc::NonPositiveLambda, "lambda axis must start above 0");
    if (grid.y.min < 0) throw Error(Errc::InvalidBudget, "steering axis must be non-negative");
    build_fig2(grid);
  }
  return grid;
}

std::string format_number(double x) {
  if (x == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

void write_csv(const ContourGrid& grid, std::ostream& os) {
  const auto b = [](bool v) { return v ? "1" : "0"; };
  if (is_fig1(grid.params.kind)) {
    os << "tau,y,f_avg,unphysical,eb,sb_ba,sb_ab,accessible,secure\n";
    for (const auto& c : grid.fig1) {
      os << format_number(c.tau) << ',' << format_number(c.y) << ','
         << (c.f_avg ? format_number(*c.f_avg) : std::string()) << ',' << b(c.unphysical) << ',' << b(c.eb)
         << ',' << b(c.sb_ba) << ',' << b(c.sb_ab) << ',' << b(c.accessible) << ',' << b(c.secure) << '\n';
    }
  } else {
    os << "lambda,s,f_opt,threshold,secure\n";
    for (const auto& c : grid.fig2) {
      os << format_number(c.lambda) << ',' << format_number(c.s) << ',' << format_number(c.f_opt) << ','
         << format_number(c.threshold) << ',' << b(c.secure) << '\n';
    }
  }
}

nlohmann::json to_json(const ContourGrid& grid) {
  using nlohmann::json;
  const auto axis = [](const Axis& a) {
    return json{{"name", a.name}, {"min", json_number(a.min)}, {"max", json_number(a.max)},
                {"step", json_number(a.step)}, {"count", a.count()}};
  };
  const bool fig1 = is_fig1(grid.params.kind);
  json params{{"kind", to_string(grid.params.kind)},
              {"direction", panel_direction(grid.params.kind) == Direction::BtoA ? "ba" : "ab"},
              {"x_axis", axis(grid.x)},
              {"y_axis", axis(grid.y)}};
  if (fig1) {
    params["lambda"] = json_number(grid.params.lambda);
    params["steering"] = json_number(grid.params.steering);
    params["threshold"] = json_number(no_cloning_threshold(grid.params.lambda));
    params["budget"] = {{"s_ba", json_number(grid.budget.s_ba)}, {"s_ab", json_number(grid.budget.s_ab)}};
    params["budget_note"] = grid.budget_note;
  }

  json rows = json::array();
  json columns;
  if (fig1) {
    columns = {"tau", "y", "f_avg", "unphysical", "eb", "sb_ba", "sb_ab", "accessible", "secure"};
    for (const auto& c : grid.fig1) {
      rows.push_back({json_number(c.tau), json_number(c.y), c.f_avg ? json_number(*c.f_avg) : json(nullptr),
                      c.unphysical, c.eb, c.sb_ba, c.sb_ab, c.accessible, c.secure});
    }
  } else {
    columns = {"lambda", "s", "f_opt", "threshold", "secure"};
    for (const auto& c : grid.fig2) {
      rows.push_back({json_number(c.lambda), json_number(c.s), json_number(c.f_opt), json_number(c.threshold),
                      c.secure});
    }
  }

  json overlays = json::array();
  for (const auto& o : grid.overlays) {
    json pts = json::array();
    for (const auto& p : o.points) pts.push_back({json_number(p.x), json_number(p.y), p.clamp});
    overlays.push_back({{"name", o.name}, {"columns", {"x", "y", "clamp"}}, {"points", pts}});
  }
  json marked = json::array();
  for (const auto& m : grid.marked) {
    marked.push_back({{"name", m.name}, {"x", json_number(m.x)}, {"y", json_number(m.y)}});
  }

  return json{{"schema_version", kSchemaVersion},
              {"command", "contour"},
              {"params", params},
              {"data", {{"columns", columns}, {"rows", rows}, {"overlays", overlays}, {"marked", marked}}}};
}

}  // namespace cvtele
