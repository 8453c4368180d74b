#include "coopifc.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/bounds.hpp"
#include "core/gaussinfo.hpp"
#include "core/gdof.hpp"
#include "core/io.hpp"
#include "core/ksum.hpp"
#include "core/model.hpp"

using nlohmann::json;

struct coopifc_channel {
  coopifc::ChannelParams ch;
  std::optional<coopifc::MatrixXcd> Q;
  coopifc::DeltaSpec deltas;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_err(char** err, const std::string& msg) {
  if (err) *err = dup_string(msg);
}

template <typename Fn>
int guarded(char** err, Fn&& fn) {
  try {
    return fn();
  } catch (const coopifc::DegenerateError& e) {
    set_err(err, e.what());
    return COOPIFC_EDEGENERATE;
  } catch (const std::exception& e) {
    set_err(err, e.what());
    return COOPIFC_EINVAL;
  }
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

coopifc::BoundKind kind_from_name(const std::string& name) {
  using coopifc::BoundKind;
  for (BoundKind k :
       {BoundKind::CutR1a, BoundKind::CutR1b, BoundKind::CutR1c,
        BoundKind::CutR2a, BoundKind::CutR2b, BoundKind::CutR2c,
        BoundKind::CutSum, BoundKind::SumRateA, BoundKind::SumRateB,
        BoundKind::MimoUltimate}) {
    if (name == coopifc::bound_kind_name(k)) return k;
  }
  throw std::invalid_argument("unknown bound name: " + name);
}

coopifc::CoopMode require_mode(const char* name) {
  if (!name) throw std::invalid_argument("mode name is required");
  auto m = coopifc::mode_from_name(name);
  if (!m) throw std::invalid_argument(std::string("unknown mode: ") + name);
  return *m;
}

std::vector<int> subset_vector(const int* subset, int n) {
  if (!subset || n <= 0)
    throw std::invalid_argument("subset must be nonempty");
  return std::vector<int>(subset, subset + n);
}

coopifc::MatrixXcd input_covariance(const coopifc_channel& c) {
  if (c.Q) return *c.Q;
  coopifc::MatrixXcd Q =
      coopifc::MatrixXcd::Zero(c.ch.nodes(), c.ch.nodes());
  for (int i = 0; i < c.ch.nodes(); ++i) Q(i, i) = c.ch.P(i);
  return Q;
}

}  // namespace

extern "C" {

void coopifc_string_free(char* s) { std::free(s); }

void coopifc_channel_free(coopifc_channel* ch) { delete ch; }

int coopifc_channel_parse(const char* json_text, coopifc_channel** out,
                          char** err) {
  return guarded(err, [&] {
    if (!json_text || !out)
      throw std::invalid_argument("null argument");
    coopifc::ChannelFile file = coopifc::parse_channel_json(json_text);
    auto issues = coopifc::validate_channel(file.ch);
    if (!issues.empty()) {
      std::ostringstream os;
      for (size_t i = 0; i < issues.size(); ++i)
        os << (i ? "\n" : "") << issues[i];
      throw std::invalid_argument(os.str());
    }
    *out = new coopifc_channel{std::move(file.ch), std::move(file.Q), {}};
    return COOPIFC_OK;
  });
}

int coopifc_channel_from_symmetric(const char* sym_json, const char* mode,
                                   coopifc_channel** out, char** err) {
  return guarded(err, [&] {
    if (!sym_json || !out)
      throw std::invalid_argument("null argument");
    coopifc::SymmetricParams sym = coopifc::parse_symmetric_json(sym_json);
    auto c = new coopifc_channel{};
    if (mode) {
      coopifc::ModedParams moded =
          coopifc::apply_mode(require_mode(mode), sym);
      c->ch = coopifc::build_symmetric(moded.sym, moded.mask);
      c->deltas = {moded.delta1, moded.delta2};
    } else {
      c->ch = coopifc::build_symmetric(sym);
    }
    *out = c;
    return COOPIFC_OK;
  });
}

int coopifc_channel_to_json(const coopifc_channel* ch, char** json_out,
                            char** err) {
  return guarded(err, [&] {
    if (!ch || !json_out) throw std::invalid_argument("null argument");
    *json_out = dup_string(coopifc::channel_to_json(ch->ch));
    return COOPIFC_OK;
  });
}

int coopifc_eval_bounds(const coopifc_channel* ch, const char* bounds,
                        const char* optimizer_json, char** json_out,
                        char** err) {
  return guarded(err, [&] {
    if (!ch || !json_out) throw std::invalid_argument("null argument");
    coopifc::OptimizerConfig cfg;
    if (optimizer_json) cfg = coopifc::parse_optimizer_json(optimizer_json);

    std::vector<coopifc::BoundKind> kinds;
    std::string filter = bounds ? bounds : "all";
    if (filter == "all" || filter.empty()) {
      using coopifc::BoundKind;
      kinds = {BoundKind::CutR1a, BoundKind::CutR1b, BoundKind::CutR1c,
               BoundKind::CutR2a, BoundKind::CutR2b, BoundKind::CutR2c,
               BoundKind::CutSum, BoundKind::SumRateA, BoundKind::SumRateB,
               BoundKind::MimoUltimate};
    } else {
      for (const auto& name : split_csv_list(filter))
        kinds.push_back(kind_from_name(name));
    }

    json j;
    j["bounds"] = json::object();
    for (coopifc::BoundKind k : kinds) {
      coopifc::BoundReport rep =
          k == coopifc::BoundKind::MimoUltimate
              ? coopifc::mimo_ultimate(ch->ch, cfg)
              : coopifc::maximize(ch->ch, coopifc::BoundId::of(k), cfg,
                                  ch->deltas);
      j["bounds"][coopifc::bound_kind_name(k)] =
          json::parse(coopifc::bound_report_to_json(rep));
    }
    coopifc::SumRateReport sum =
        coopifc::sum_rate_upper(ch->ch, cfg, ch->deltas);
    j["sum_rate"] = json::parse(coopifc::sum_rate_report_to_json(sum));
    *json_out = dup_string(j.dump(2));
    return COOPIFC_OK;
  });
}

int coopifc_gdof_point(const char* mode, double alpha, double beta, double* d,
                       int* tight, char** err) {
  return guarded(err, [&] {
    if (!d) throw std::invalid_argument("null argument");
    coopifc::GdofPoint p =
        coopifc::mode_curve(require_mode(mode), alpha, beta);
    *d = p.d;
    if (tight) *tight = p.tight ? 1 : 0;
    return COOPIFC_OK;
  });
}

int coopifc_gdof_sweep(const char* mode, double beta, double a0, double a1,
                       double step, char** csv_out, char** err) {
  return guarded(err, [&] {
    if (!csv_out) throw std::invalid_argument("null argument");
    if (!(step > 0.0) || a1 < a0)
      throw std::invalid_argument("grid not increasing");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
      double a = a0 + i * step;
      if (a > a1 + step * 1e-9) break;
      grid.push_back(std::min(a, a1));
    }
    coopifc::GdofCurve curve = coopifc::sweep(require_mode(mode), beta, grid);
    *csv_out = dup_string(coopifc::curve_to_csv(curve));
    return COOPIFC_OK;
  });
}

int coopifc_curves_to_svg(const char* const* csvs, int n, char** svg_out,
                          char** err) {
  return guarded(err, [&] {
    if (!csvs || n <= 0 || !svg_out)
      throw std::invalid_argument("null argument");
    std::vector<coopifc::GdofCurve> curves;
    for (int i = 0; i < n; ++i)
      curves.push_back(coopifc::curve_from_csv(csvs[i]));
    *svg_out = dup_string(coopifc::curves_to_svg(curves));
    return COOPIFC_OK;
  });
}

int coopifc_curve_csv_to_json(const char* csv, char** json_out, char** err) {
  return guarded(err, [&] {
    if (!csv || !json_out) throw std::invalid_argument("null argument");
    coopifc::GdofCurve c = coopifc::curve_from_csv(csv);
    json rows = json::array();
    for (const auto& p : c.points) {
      rows.push_back({{"alpha", p.alpha},
                      {"mode", coopifc::mode_name(c.mode)},
                      {"beta", c.beta},
                      {"d", p.d},
                      {"two_d", 2.0 * p.d},
                      {"tight", p.tight}});
    }
    *json_out = dup_string(rows.dump(2));
    return COOPIFC_OK;
  });
}

int coopifc_ksum_terms(int K, const int* subset, int n,
                       int condition_on_dest_inputs, char** text_out,
                       char** err) {
  return guarded(err, [&] {
    if (!text_out) throw std::invalid_argument("null argument");
    coopifc::SumBoundSpec spec = coopifc::generate_terms(
        K, subset_vector(subset, n), condition_on_dest_inputs != 0);
    *text_out = dup_string(coopifc::render_terms(spec));
    return COOPIFC_OK;
  });
}

int coopifc_ksum_eval(const coopifc_channel* ch, const int* subset, int n,
                      int condition_on_dest_inputs, char** json_out,
                      char** err) {
  return guarded(err, [&] {
    if (!ch || !json_out) throw std::invalid_argument("null argument");
    coopifc::SumBoundSpec spec = coopifc::generate_terms(
        ch->ch.K, subset_vector(subset, n), condition_on_dest_inputs != 0);
    coopifc::MatrixXcd Q = input_covariance(*ch);
    coopifc::KsumValue v = coopifc::eval_terms(ch->ch, Q, spec);
    double residual = coopifc::consistency_check(ch->ch, Q, spec);
    json j;
    j["terms"] = coopifc::render_terms(spec);
    j["inband_bits"] = v.inband_bits;
    j["oob_budget_bits"] = v.oob_budget_bits;
    j["total_bits"] = v.total_bits;
    j["consistency_residual"] = residual;
    *json_out = dup_string(j.dump(2));
    return COOPIFC_OK;
  });
}

}  // extern "C"
