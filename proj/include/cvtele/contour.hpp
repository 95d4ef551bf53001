#pragma once

// Figure data: fidelity fields over the (tau, y) channel plane or the
// (lambda, s) plane, with overlay curves, as CSV or JSON.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvtele/fidelity.hpp"

namespace cvtele {

inline constexpr int kSchemaVersion = 1;

enum class FigureKind { Fig1a, Fig1b, Fig2a, Fig2b };

std::optional<FigureKind> parse_figure_kind(const std::string& name);
std::string to_string(FigureKind kind);

/// Closed grid min, min + step, ..., up to max (inclusive within 1e-9 steps).
struct Axis {
  std::string name;
  double min = 0;
  double max = 0;
  double step = 0;

  std::size_t count() const;
  double at(std::size_t i) const { return min + static_cast<double>(i) * step; }
};

struct ContourParams {
  FigureKind kind = FigureKind::Fig1a;
  double lambda = 0.2;
  /// fig1 kinds: fixed steerability (s_ba for fig1a, s_ab for fig1b).
  double steering = 0.4;
  std::optional<Axis> x;
  std::optional<Axis> y;

  /// Defaults per kind: lambda = 0.2, s_ba = 0.4 (fig1a) / s_ab = 0.6 (fig1b),
  /// grid step 0.005.
  static ContourParams defaults(FigureKind kind);
};

struct Fig1Cell {
  double tau;
  double y;
  std::optional<double> f_avg;  ///< empty where unphysical
  bool unphysical, eb, sb_ba, sb_ab, accessible, secure;
};

struct Fig2Cell {
  double lambda;
  double s;
  double f_opt;
  double threshold;
  bool secure;
};

struct OverlayPoint {
  double x;
  double y;
  bool clamp = false;  ///< optimum pinned at a quantum-limited endpoint
};

struct Overlay {
  std::string name;
  std::vector<OverlayPoint> points;
};

struct MarkedPoint {
  std::string name;
  double x;
  double y;
};

struct ContourGrid {
  ContourParams params;
  Axis x;
  Axis y;
  SteeringBudget<double> budget;  ///< fig1 kinds only: accessible-region budget
  std::string budget_note;
  std::vector<Fig1Cell> fig1;
  std::vector<Fig2Cell> fig2;
  std::vector<Overlay> overlays;
  std::vector<MarkedPoint> marked;
};

ContourGrid build_contour(const ContourParams& params);

void write_csv(const ContourGrid& grid, std::ostream& os);
nlohmann::json to_json(const ContourGrid& grid);

/// 12 significant digits, shortest form (printf %.12g).
std::string format_number(double x);
/// Value rounded to 12 significant digits, or null when not finite.
nlohmann::json json_number(double x);

}  // namespace cvtele
