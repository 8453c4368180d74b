// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit if any
// criterion fails. Criteria and tolerances are fixed; do not loosen them to
// make a run green.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/gaussinfo.hpp"
#include "core/gdof.hpp"
#include "core/ksum.hpp"
#include "core/model.hpp"

using namespace coopifc;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what,
            const std::string& detail = "") {
  std::printf("criterion %2d: %s  %s%s%s\n", n, ok ? "PASS" : "FAIL",
              what.c_str(), detail.empty() ? "" : "  ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ChannelParams scalar_link(double snr) {
  ChannelParams ch;
  ch.K = 1;
  ch.H = MatrixXcd::Zero(2, 2);
  ch.H(1, 0) = std::sqrt(snr);
  ch.P = VectorXd::Ones(2);
  ch.SigmaZ = MatrixXcd::Identity(2, 2);
  ch.C = VectorXd::Zero(2);
  return ch;
}

ChannelParams random_channel(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ChannelParams ch;
  ch.K = 2;
  ch.H = MatrixXcd::Zero(4, 4);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      if (l != i) ch.H(l, i) = gauss(rng);
  ch.P = VectorXd::Ones(4);
  ch.SigmaZ = MatrixXcd::Identity(4, 4);
  ch.C = VectorXd::Zero(4);
  return ch;
}

MatrixXcd random_q(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss;
  MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  MatrixXd Q = A * A.transpose();
  Q /= Q.diagonal().maxCoeff();
  return Q.cast<std::complex<double>>();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 1. Scalar mutual information against the closed form.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double snr : {0.1, 1.0, 10.0, 1e3}) {
    ChannelParams ch = scalar_link(snr);
    MatrixXcd Q = MatrixXcd::Zero(2, 2);
    Q(0, 0) = 1.0;
    JointCov jc = joint_covariance(ch, Q);
    const double mi = mutual_info(jc, {"X1"}, {"Y2"}, {});
    worst = std::max(worst, std::abs(mi - std::log2(1.0 + snr)));
  }
  const double dt = seconds_since(t0);
  report(1, worst <= 1e-9 && dt < 1.0, "scalar MI vs log2(1+snr)",
         "max err " + fmt(worst) + ", " + fmt(dt) + " s");
}

// 2. Chain rule on random 8-dimensional PSD instances.
void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    MatrixXd A(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) A(i, j) = gauss(rng);
    MatrixXd M = A * A.transpose() + 1e-3 * MatrixXd::Identity(8, 8);
    std::vector<std::string> labels;
    for (int i = 0; i < 8; ++i) labels.push_back("V" + std::to_string(i + 1));
    JointCov jc = JointCov::make(M.cast<std::complex<double>>(), labels);
    VarSet Av{"V1", "V2"}, B{"V3", "V4"}, C{"V5", "V6"}, D{"V7", "V8"};
    const double lhs = mutual_info(jc, Av, set_union(B, C), D);
    const double rhs =
        mutual_info(jc, Av, B, D) + mutual_info(jc, Av, C, set_union(B, D));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  const double dt = seconds_since(t0);
  report(2, worst <= 1e-8 && dt < 10.0, "chain rule on 1000 random instances",
         "max err " + fmt(worst) + ", " + fmt(dt) + " s");
}

// 3. Numerical sum-rate bound vs the closed-form exponent minimum.
void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  const double snr = 1e8;
  const double L = std::log2(1.0 + snr);
  OptimizerConfig cfg;
  cfg.restarts = 32;
  cfg.noise_corr_entries = {{3, 4}};
  bool ok = true;
  std::string bad;
  for (int step = 0; step <= 12; ++step) {
    const double alpha = 0.25 * step;
    SymmetricParams base;
    base.snr = snr;
    base.alpha = alpha;
    ModedParams mp = apply_mode(CoopMode::NoCoop, base);
    ChannelParams ch = build_symmetric(mp.sym, mp.mask);
    SumRateReport rep =
        sum_rate_upper(ch, cfg, DeltaSpec{mp.delta1, mp.delta2});

    ExponentParams e;
    e.alpha = alpha;
    const double closed = gdof_bounds(e).min_two_d;
    const double diff = std::abs(rep.headline_bits / L - closed);
    std::printf("  alpha %.2f: numeric %.4f, closed form %.4f, diff %.4f\n",
                alpha, rep.headline_bits / L, closed, diff);
    if (diff > 0.05) {
      ok = false;
      bad += (bad.empty() ? "" : ", ") + fmt(alpha);
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 300.0) ok = false;
  report(3, ok, "finite-snr sum rate within 0.05 of the exponent formula",
         (bad.empty() ? std::string("all alphas") : "off at alpha " + bad) +
             ", " + fmt(dt) + " s");
  if (!ok && bad == "1") {
    std::printf(
        "  note: at alpha=1 every constituent of the minimum is at least\n"
        "  log2(1+4*snr), i.e. normalized 1+2/log2(1+snr) ~ 1.075 at\n"
        "  snr=1e8, while the exponent formula gives 1; the 0.05 margin is\n"
        "  not reachable at this snr by any valid bound of this family.\n");
  }
}

// 4. User-pair relabeling exchanges the two sum-rate bounds.
void criterion4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    ChannelParams ch = random_channel(rng);
    for (int i = 0; i < 4; ++i) ch.C(i) = unif(rng);
    MatrixXcd Q = random_q(rng, 4);
    auto direct = eval_sum_rate_pair(ch, Q);
    auto swapped = eval_sum_rate_pair(swap_users(ch), swap_users(Q));
    worst = std::max(worst,
                     std::abs(direct[0].total_bits - swapped[1].total_bits));
    worst = std::max(worst,
                     std::abs(direct[1].total_bits - swapped[0].total_bits));
  }
  report(4, worst <= 1e-10, "user-swap symmetry on 200 random instances",
         "max err " + fmt(worst));
}

// 5. Four-entropy rearrangement when the source rows are zero.
void criterion5() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    ChannelParams ch = random_channel(rng);
    ch.H.row(0).setZero();
    ch.H.row(1).setZero();
    MatrixXcd Q = random_q(rng, 4);
    const double direct = eval_sum_rate_pair(ch, Q)[1].total_bits;
    JointCov jc = joint_covariance(ch, Q);
    const double rearranged =
        cond_entropy(jc, {"Y3"}, {"X3"}) -
        cond_entropy(jc, {"Y3"}, {"X1", "X2", "X3", "X4"}) +
        cond_entropy(jc, {"Y4"}, {"Y3", "X1", "X3", "X4"}) -
        cond_entropy(jc, {"Y4"}, {"X1", "X2", "X3", "X4", "Y3"});
    worst = std::max(worst, std::abs(direct - rearranged));
  }
  report(5, worst <= 1e-9, "entropy rearrangement on 200 random instances",
         "max err " + fmt(worst));
}

// 6. Formula-level ordering of the closed-form curves.
void criterion6() {
  bool ok = true;
  for (double beta : {0.125, 2.5}) {
    for (int i = 0; i <= 600; ++i) {
      const double a = 0.005 * i;
      const double w = w_curve(a);
      const double rl = mode_curve(CoopMode::RateLimitedFeedback, a, beta).d;
      const double v = v_curve(a);
      const double ult = mode_curve(CoopMode::Ultimate, a, beta).d;
      if (!(w <= rl + 1e-12 && rl <= v + 1e-12 && v <= ult + 1e-12)) ok = false;
      if (w + beta >= v && std::abs(rl - v) > 1e-12) ok = false;
    }
    for (double d : {w_curve(1.0), v_curve(1.0),
                     mode_curve(CoopMode::RateLimitedFeedback, 1.0, beta).d,
                     mode_curve(CoopMode::Ultimate, 1.0, beta).d}) {
      if (d != 0.5) ok = false;
    }
  }
  report(6, ok, "pointwise curve ordering and the alpha=1 meeting point");
}

// 7. Rank-deficiency discontinuity of the full-cooperation limit.
void criterion7() {
  const double snr = 1e8;
  const double L = std::log2(1.0 + snr);
  OptimizerConfig cfg;
  cfg.restarts = 8;

  ChannelParams ones;
  ones.K = 2;
  ones.H = MatrixXcd::Zero(4, 4);
  ones.H(2, 0) = ones.H(2, 1) = ones.H(3, 0) = ones.H(3, 1) = std::sqrt(snr);
  ones.P = VectorXd::Ones(4);
  ones.SigmaZ = MatrixXcd::Identity(4, 4);
  ones.C = VectorXd::Zero(4);
  const double rank1 = mimo_ultimate(ones, cfg).value.total_bits / L;
  // Identical gains make the 2x2 array rank one: a single spatial degree
  // with receive array gain 2 and the best transmit alignment, so the
  // exact value is log2(1 + 2*snr*4).
  const double rank1_oracle = std::log2(1.0 + 8.0 * snr) / L;

  SymmetricParams s;
  s.snr = snr;
  s.alpha = 0.5;
  ChannelParams half = build_symmetric(s);
  const double full = mimo_ultimate(half, cfg).value.total_bits / L;

  const bool ok = std::abs(rank1 - rank1_oracle) <= 1e-6 && rank1 < 1.5 &&
                  full >= 1.9 && full <= 2.1;
  report(7, ok, "full-cooperation limit, rank-1 vs full-rank",
         "rank-1 " + fmt(rank1) + " (oracle " + fmt(rank1_oracle) +
             "), full-rank " + fmt(full));
}

// 8. Golden term chain plus randomized chain-rule consistency at K=4.
void criterion8() {
  const char* src = std::getenv("COOPIFC_SRC");
  bool ok = true;
  std::string detail;
  const std::string rendered = render_terms(generate_terms(4, {1, 2, 3}));
  if (src) {
    const std::string golden =
        slurp(std::string(src) + "/tests/golden/ksum_4_123.txt");
    if (rendered != golden) {
      ok = false;
      detail = "golden mismatch";
    }
  } else {
    ok = false;
    detail = "COOPIFC_SRC not set";
  }

  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ChannelParams ch;
    ch.K = 4;
    ch.H = MatrixXcd::Zero(8, 8);
    for (int l = 0; l < 8; ++l)
      for (int i = 0; i < 8; ++i)
        if (l != i) ch.H(l, i) = 0.5 * gauss(rng);
    ch.P = VectorXd::Ones(8);
    ch.SigmaZ = MatrixXcd::Identity(8, 8);
    ch.C = VectorXd::Zero(8);
    MatrixXcd Q = random_q(rng, 8);
    worst = std::max(worst,
                     consistency_check(ch, Q, generate_terms(4, {1, 2, 3})));
  }
  if (worst > 1e-8) ok = false;
  report(8, ok, "term-chain fidelity and consistency",
         detail.empty() ? "max residual " + fmt(worst) : detail);
}

// 9. Two-user chain on the degenerate channel equals the classical bound.
void criterion9() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    ChannelParams ch;
    ch.K = 2;
    ch.H = MatrixXcd::Zero(4, 4);
    for (int l = 2; l < 4; ++l)
      for (int i = 0; i < 2; ++i) ch.H(l, i) = gauss(rng);
    ch.P = VectorXd::Ones(4);
    ch.P(2) = ch.P(3) = 0.0;
    ch.SigmaZ = MatrixXcd::Identity(4, 4);
    ch.C = VectorXd::Zero(4);
    MatrixXcd Q = MatrixXcd::Zero(4, 4);
    std::normal_distribution<double> g;
    MatrixXd A(2, 2);
    A << g(rng), g(rng), g(rng), g(rng);
    MatrixXd Qs = A * A.transpose();
    Qs /= Qs.diagonal().maxCoeff();
    Q.topLeftCorner(2, 2) = Qs.cast<std::complex<double>>();

    const double val = eval_sum_rate_pair(ch, Q)[1].total_bits;  // second listed
    JointCov jc = joint_covariance(ch, Q);
    const double classical =
        mutual_info(jc, {"X2"}, {"Y4"}, {"Y3", "X1"}) +
        mutual_info(jc, {"X1", "X2"}, {"Y3"}, {});
    worst = std::max(worst, std::abs(val - classical));
  }
  report(9, worst <= 1e-9, "classical two-term reduction",
         "max err " + fmt(worst));
}

// 10. Figure bundles match the closed forms digit for digit.
void criterion10() {
  const char* cli = std::getenv("COOPIFC_CLI");
  if (!cli) {
    report(10, false, "figure reproduction", "COOPIFC_CLI not set");
    return;
  }
  bool ok = true;
  std::string detail;
  const std::string dir = "/tmp/coopifc_acceptance_fig";
  std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  const CoopMode modes[] = {
      CoopMode::NoCoop,         CoopMode::InBandSource,
      CoopMode::OutOfBandSource, CoopMode::OutputFeedback,
      CoopMode::RateLimitedFeedback, CoopMode::Ultimate};
  for (int which : {2, 3}) {
    const double beta = which == 2 ? 0.125 : 2.5;
    const std::string cmd = std::string(cli) + " reproduce-fig --which " +
                            std::to_string(which) + " --out " + dir;
    if (std::system(cmd.c_str()) != 0) {
      ok = false;
      detail = "command failed";
      break;
    }
    for (CoopMode m : modes) {
      const std::string path = dir + "/fig" + std::to_string(which) + "-" +
                               mode_name(m) + ".csv";
      std::istringstream csv(slurp(path));
      std::string line;
      std::getline(csv, line);
      if (line != "alpha,mode,beta,d,two_d,tight") {
        ok = false;
        detail = "bad header in " + path;
        continue;
      }
      int rows = 0;
      while (std::getline(csv, line)) {
        const double alpha = 0.005 * rows;
        GdofPoint p = mode_curve(m, alpha, beta);
        char expect[160];
        std::snprintf(expect, sizeof(expect), "%.6f,%s,%.6f,%.6f,%.6f,%d",
                      alpha, mode_name(m), beta, p.d, 2.0 * p.d,
                      p.tight ? 1 : 0);
        if (line != expect) {
          ok = false;
          if (detail.empty())
            detail = "row mismatch at alpha " + fmt(alpha) + " in " + path;
        }
        ++rows;
      }
      if (rows != 601) {
        ok = false;
        detail = "row count " + std::to_string(rows) + " in " + path;
      }
    }
  }
  report(10, ok, "figure reproduction matches the closed forms", detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
