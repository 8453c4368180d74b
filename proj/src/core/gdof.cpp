#include "gdof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coopifc {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

ExponentParams from_mode(const ModedParams& mp) {
  ExponentParams e;
  e.alpha = mp.sym.alpha;
  e.alpha_tilde = mp.sym.alpha_tilde;
  e.beta_s = mp.sym.beta_s;
  e.beta_d = mp.sym.beta_d;
  e.gamma = mp.sym.gamma;
  e.delta1 = mp.delta1 * mp.sym.kappa;
  e.delta2 = mp.delta2 * mp.sym.kappa;
  return e;
}

}  // namespace

const char* gdof_line_name(GdofLine l) {
  switch (l) {
    case GdofLine::PerUserCut: return "per-user-cut";
    case GdofLine::SourceCut: return "source-cut";
    case GdofLine::SingleCut: return "single-cut";
    case GdofLine::MimoLimit: return "mimo-limit";
    case GdofLine::SumRate: return "sum-rate";
  }
  return "?";
}

GdofBoundSet gdof_bounds(const ExponentParams& e) {
  GdofBoundSet out;
  const double a = e.alpha;
  out.lines = {
      {GdofLine::PerUserCut, 2.0 * std::max({1.0, a, e.beta_d})},
      {GdofLine::SourceCut,
       2.0 * (std::max(e.beta_s + e.beta_d, 1.0 + e.gamma) + e.delta1)},
      {GdofLine::SingleCut, 2.0 * (std::max({e.beta_s, 1.0, a}) + e.delta2)},
      {GdofLine::MimoLimit, a == 1.0 ? 1.0 : 2.0 * std::max(1.0, a)},
      {GdofLine::SumRate, std::max({1.0, a, e.beta_d}) +
                              pos(std::max(e.beta_s, 1.0) - a) + e.delta2},
  };
  out.min_two_d = std::numeric_limits<double>::infinity();
  for (const auto& [l, v] : out.lines) out.min_two_d = std::min(out.min_two_d, v);
  return out;
}

double w_curve(double alpha, bool printed_form) {
  const double first = printed_form ? std::min(1.0 - alpha, alpha)
                                    : std::max(1.0 - alpha, alpha);
  return std::min({first, std::max(1.0 - alpha / 2.0, alpha / 2.0), 1.0});
}

double v_curve(double alpha) {
  return std::max(1.0 - alpha / 2.0, alpha / 2.0);
}

GdofPoint mode_curve(CoopMode mode, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument("alpha and beta must be nonnegative");
  GdofPoint p;
  p.alpha = alpha;
  p.provenance = mode_name(mode);
  switch (mode) {
    case CoopMode::NoCoop:
      p.d = w_curve(alpha);
      break;
    case CoopMode::OutputFeedback:
      p.d = v_curve(alpha);
      break;
    case CoopMode::RateLimitedFeedback:
      p.d = std::min(v_curve(alpha), w_curve(alpha) + beta);
      p.tight = !(alpha < 2.0 / 3.0 &&
                  beta < std::min(alpha / 2.0, pos(2.0 - 3.0 * alpha) / 2.0));
      break;
    case CoopMode::Ultimate:
      p.d = alpha == 1.0 ? 0.5 : std::max(1.0, alpha);
      break;
    case CoopMode::InBandSource: {
      SymmetricParams base;
      base.alpha = alpha;
      base.beta_s = beta;
      p.d = gdof_bounds(from_mode(apply_mode(mode, base))).min_two_d / 2.0;
      p.tight = !(alpha < 2.0 / 3.0 && beta < alpha / 2.0);
      break;
    }
    case CoopMode::OutOfBandSource: {
      SymmetricParams base;
      base.alpha = alpha;
      base.kappa = beta;
      p.d = gdof_bounds(from_mode(apply_mode(mode, base))).min_two_d / 2.0;
      p.tight = !(alpha < 2.0 / 3.0 && beta < std::min(alpha, 2.0 - 3.0 * alpha));
      break;
    }
    case CoopMode::TwoWayLike: {
      SymmetricParams base;
      base.alpha = alpha;
      base.kappa = beta;
      p.d = gdof_bounds(from_mode(apply_mode(mode, base))).min_two_d / 2.0;
      p.tight = false;  // constant-gap tightness open for this mode
      break;
    }
  }
  return p;
}

GdofCurve sweep(CoopMode mode, double beta,
                const std::vector<double>& alpha_grid) {
  for (size_t i = 1; i < alpha_grid.size(); ++i)
    if (!(alpha_grid[i] > alpha_grid[i - 1]))
      throw std::invalid_argument("alpha grid not strictly increasing");
  GdofCurve c;
  c.mode = mode;
  c.beta = beta;
  c.points.reserve(alpha_grid.size());
  for (double a : alpha_grid) c.points.push_back(mode_curve(mode, a, beta));
  return c;
}

}  // namespace coopifc
