#pragma once

#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace coopifc {

// Closed-form generalized-degrees-of-freedom bound set for the symmetric
// two-user channel. All rates normalized by log2(1+snr); d is per user.
struct ExponentParams {
  double alpha = 0.0;
  double alpha_tilde = 0.0;
  double beta_s = 0.0;
  double beta_d = 0.0;
  double gamma = 0.0;
  double delta1 = 0.0;  // additive budget, delta2 <= delta1
  double delta2 = 0.0;
};

enum class GdofLine {
  PerUserCut,   // 2d <= 2 max{1, alpha, beta_d}
  SourceCut,    // 2d <= 2 (max{beta_s + beta_d, 1 + gamma} + Delta1)
  SingleCut,    // 2d <= 2 (max{beta_s, 1, alpha} + Delta2)
  MimoLimit,    // 2d <= 2 max{1, alpha} (alpha != 1); 2d <= 1 at alpha = 1
  SumRate,      // 2d <= max{1,alpha,beta_d} + [max{beta_s,1} - alpha]^+ + Delta2
};

const char* gdof_line_name(GdofLine l);

struct GdofBoundSet {
  std::vector<std::pair<GdofLine, double>> lines;  // values of 2d
  double min_two_d = 0.0;
};

// Every closed-form bound line, in 2d units, plus the binding minimum.
// The SumRate line has no alpha_tilde dependence by construction.
GdofBoundSet gdof_bounds(const ExponentParams& e);

// Piecewise symmetric-GDoF profile of the non-cooperative channel.
// `printed_form` selects the variant with an inner min in the first slot,
// kept only for fidelity experiments; it degenerates to 0 at alpha = 0.
double w_curve(double alpha, bool printed_form = false);

// Profile under unlimited output feedback: max{1 - alpha/2, alpha/2}.
double v_curve(double alpha);

struct GdofPoint {
  double alpha = 0.0;
  double d = 0.0;  // per-user symmetric GDoF
  bool tight = true;
  std::string provenance;
};

// Per-mode symmetric GDoF at one interference level. beta is the mode's free
// cooperation strength. The tightness flag is false on the regimes where the
// bound set is not known to be tight to within a constant gap.
GdofPoint mode_curve(CoopMode mode, double alpha, double beta);

struct GdofCurve {
  CoopMode mode = CoopMode::NoCoop;
  double beta = 0.0;
  std::vector<GdofPoint> points;
};

// Pointwise mode_curve over a strictly increasing alpha grid.
GdofCurve sweep(CoopMode mode, double beta, const std::vector<double>& alpha_grid);

}  // namespace coopifc
