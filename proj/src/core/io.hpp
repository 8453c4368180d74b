#pragma once

#include <optional>
#include <string>

#include "bounds.hpp"
#include "gdof.hpp"
#include "ksum.hpp"
#include "model.hpp"

namespace coopifc {

// Channel file: { "K": int, "H": [[ [re,im] | number, ... ]], "P": [...],
// "SigmaZ": [[...]], "C": [...] }, optionally with "Q" (input covariance,
// same entry syntax as H). Throws std::invalid_argument with a "parse error"
// or per-field diagnostic message on malformed input.
struct ChannelFile {
  ChannelParams ch;
  std::optional<MatrixXcd> Q;
};

ChannelFile parse_channel_json(const std::string& text);
std::string channel_to_json(const ChannelParams& ch);

// Symmetric spec file: { "snr": float, "alpha": float, "alpha_tilde": float,
// "beta_s": float, "beta_d": float, "gamma": float, "kappa": float }.
SymmetricParams parse_symmetric_json(const std::string& text);

OptimizerConfig parse_optimizer_json(const std::string& text);

std::string bound_report_to_json(const BoundReport& rep);
std::string sum_rate_report_to_json(const SumRateReport& rep);

// CSV with header "alpha,mode,beta,d,two_d,tight", floats with 6 decimals,
// booleans as 0/1.
std::string curve_to_csv(const GdofCurve& curve);
GdofCurve curve_from_csv(const std::string& csv);

// Minimal static SVG: axes plus one 2d-vs-alpha polyline per curve.
std::string curves_to_svg(const std::vector<GdofCurve>& curves);

std::string terms_to_json(const SumBoundSpec& spec);

}  // namespace coopifc
