#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace coopifc {

using nlohmann::json;

namespace {

std::complex<double> parse_entry(const json& e, const char* what) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw std::invalid_argument(std::string(what) +
                              ": entry must be a number or [re,im]");
}

MatrixXcd parse_matrix(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(n) + " rows");
  MatrixXcd M(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::invalid_argument(std::string(what) + ": row " +
                                  std::to_string(r) + " has wrong length");
    for (int c = 0; c < n; ++c) M(r, c) = parse_entry(j[r][c], what);
  }
  return M;
}

VectorXd parse_vector(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(n) + " values");
  VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number())
      throw std::invalid_argument(std::string(what) + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

json must_parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("parse error");
  return j;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json matrix_to_json(const MatrixXcd& M) {
  json rows = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c)
      row.push_back({M(r, c).real(), M(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

ChannelFile parse_channel_json(const std::string& text) {
  json j = must_parse(text);
  if (!j.is_object() || !j.contains("K") || !j["K"].is_number_integer())
    throw std::invalid_argument("channel file: missing integer K");
  ChannelFile out;
  out.ch.K = j["K"].get<int>();
  if (out.ch.K < 1) throw std::invalid_argument("channel file: K must be >= 1");
  const int n = 2 * out.ch.K;
  for (const char* key : {"H", "P", "SigmaZ", "C"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("channel file: missing ") + key);
  out.ch.H = parse_matrix(j["H"], n, "H");
  out.ch.P = parse_vector(j["P"], n, "P");
  out.ch.SigmaZ = parse_matrix(j["SigmaZ"], n, "SigmaZ");
  out.ch.C = parse_vector(j["C"], n, "C");
  if (j.contains("Q")) out.Q = parse_matrix(j["Q"], n, "Q");
  return out;
}

std::string channel_to_json(const ChannelParams& ch) {
  json j;
  j["K"] = ch.K;
  j["H"] = matrix_to_json(ch.H);
  j["P"] = std::vector<double>(ch.P.data(), ch.P.data() + ch.P.size());
  j["SigmaZ"] = matrix_to_json(ch.SigmaZ);
  j["C"] = std::vector<double>(ch.C.data(), ch.C.data() + ch.C.size());
  return j.dump(2);
}

SymmetricParams parse_symmetric_json(const std::string& text) {
  json j = must_parse(text);
  if (!j.is_object() || !j.contains("snr") || !j["snr"].is_number())
    throw std::invalid_argument("symmetric spec: missing numeric snr");
  SymmetricParams s;
  s.snr = j["snr"].get<double>();
  auto opt = [&](const char* key, double& field) {
    if (j.contains(key)) {
      if (!j[key].is_number())
        throw std::invalid_argument(std::string("symmetric spec: ") + key +
                                    " must be numeric");
      field = j[key].get<double>();
    }
  };
  opt("alpha", s.alpha);
  opt("alpha_tilde", s.alpha_tilde);
  opt("beta_s", s.beta_s);
  opt("beta_d", s.beta_d);
  opt("gamma", s.gamma);
  opt("kappa", s.kappa);
  return s;
}

OptimizerConfig parse_optimizer_json(const std::string& text) {
  json j = must_parse(text);
  OptimizerConfig cfg;
  if (!j.is_object())
    throw std::invalid_argument("optimizer config: expected an object");
  if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
  if (j.contains("max_iters")) cfg.max_iters = j["max_iters"].get<int>();
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("noise_corr_entries"))
    for (const auto& e : j["noise_corr_entries"])
      cfg.noise_corr_entries.emplace_back(e[0].get<int>(), e[1].get<int>());
  return cfg;
}

namespace {

json bound_report_json(const BoundReport& rep) {
  json j;
  j["id"] = bound_kind_name(rep.value.id.kind);
  if (rep.value.id.kind == BoundKind::GenericCut) j["cut"] = rep.value.id.cut.S;
  j["inband_bits"] = rep.value.inband_bits;
  j["oob_budget_bits"] = rep.value.oob_budget_bits;
  j["total_bits"] = rep.value.total_bits;
  j["Q_star"] = matrix_to_json(rep.Q_star);
  j["optimizer_trace"] = {
      {"restarts", rep.trace.restarts},
      {"evaluations", rep.trace.evaluations},
      {"best_per_restart", rep.trace.best_per_restart},
      {"noise_corr", rep.trace.noise_corr},
      {"converged", rep.trace.converged},
  };
  return j;
}

}  // namespace

std::string bound_report_to_json(const BoundReport& rep) {
  return bound_report_json(rep).dump(2);
}

std::string sum_rate_report_to_json(const SumRateReport& rep) {
  json j;
  j["headline_bits"] = rep.headline_bits;
  json cons = json::array();
  for (const auto& [name, v] : rep.constituents)
    cons.push_back({{"name", name}, {"total_bits", v}});
  j["constituents"] = cons;
  json reps;
  for (const auto& [name, r] : rep.reports) reps[name] = bound_report_json(r);
  j["reports"] = reps;
  return j.dump(2);
}

std::string curve_to_csv(const GdofCurve& curve) {
  std::ostringstream os;
  os << "alpha,mode,beta,d,two_d,tight\n";
  for (const auto& p : curve.points) {
    os << fmt6(p.alpha) << ',' << mode_name(curve.mode) << ','
       << fmt6(curve.beta) << ',' << fmt6(p.d) << ',' << fmt6(2.0 * p.d) << ','
       << (p.tight ? 1 : 0) << '\n';
  }
  return os.str();
}

GdofCurve curve_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != "alpha,mode,beta,d,two_d,tight")
    throw std::invalid_argument("csv: bad header");
  GdofCurve c;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw std::invalid_argument("csv: bad row");
    if (first) {
      auto m = mode_from_name(fields[1]);
      if (!m) throw std::invalid_argument("csv: unknown mode " + fields[1]);
      c.mode = *m;
      c.beta = std::stod(fields[2]);
      first = false;
    }
    GdofPoint p;
    p.alpha = std::stod(fields[0]);
    p.d = std::stod(fields[3]);
    p.tight = fields[5] == "1";
    p.provenance = fields[1];
    c.points.push_back(p);
  }
  return c;
}

std::string curves_to_svg(const std::vector<GdofCurve>& curves) {
  const double W = 720, H = 480, ml = 60, mr = 160, mt = 30, mb = 50;
  double amin = 0, amax = 1, ymax = 1;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      amin = std::min(amin, p.alpha);
      amax = std::max(amax, p.alpha);
      ymax = std::max(ymax, 2.0 * p.d);
    }
  auto px = [&](double a) { return ml + (a - amin) / (amax - amin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - y / ymax * (H - mt - mb); };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes with simple ticks every 0.5.
  os << "<line x1=\"" << px(amin) << "\" y1=\"" << py(0) << "\" x2=\""
     << px(amax) << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(amin) << "\" y1=\"" << py(0) << "\" x2=\""
     << px(amin) << "\" y2=\"" << py(ymax) << "\" stroke=\"black\"/>\n";
  for (double a = amin; a <= amax + 1e-9; a += 0.5) {
    os << "<line x1=\"" << px(a) << "\" y1=\"" << py(0) << "\" x2=\"" << px(a)
       << "\" y2=\"" << py(0) + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(a) << "\" y=\"" << py(0) + 20
       << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt6(a).substr(0, 4)
       << "</text>\n";
  }
  for (double y = 0; y <= ymax + 1e-9; y += 0.5) {
    os << "<line x1=\"" << px(amin) - 5 << "\" y1=\"" << py(y) << "\" x2=\""
       << px(amin) << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(amin) - 10 << "\" y=\"" << py(y) + 4
       << "\" font-size=\"12\" text-anchor=\"end\">" << fmt6(y).substr(0, 4)
       << "</text>\n";
  }
  os << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"" << H - 10
     << "\" font-size=\"13\" text-anchor=\"middle\">alpha</text>\n";
  os << "<text x=\"15\" y=\"" << (mt + (H - mt - mb) / 2)
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << (mt + (H - mt - mb) / 2) << ")\">2d</text>\n";
  int ci = 0;
  for (const auto& c : curves) {
    const char* color = palette[ci % 7];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : c.points)
      os << px(p.alpha) << ',' << py(2.0 * p.d) << ' ';
    os << "\"/>\n";
    os << "<line x1=\"" << W - mr + 15 << "\" y1=\"" << mt + 20 * ci + 10
       << "\" x2=\"" << W - mr + 40 << "\" y2=\"" << mt + 20 * ci + 10
       << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - mr + 45 << "\" y=\"" << mt + 20 * ci + 14
       << "\" font-size=\"12\">" << mode_name(c.mode) << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

std::string terms_to_json(const SumBoundSpec& spec) {
  json j;
  j["K"] = spec.K;
  j["S"] = spec.S;
  json terms = json::array();
  for (const auto& t : spec.terms)
    terms.push_back({{"A", t.A}, {"B", t.B}, {"C", t.C}});
  j["terms"] = terms;
  return j.dump(2);
}

}  // namespace coopifc
