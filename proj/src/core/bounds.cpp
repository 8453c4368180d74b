#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace coopifc {

namespace {

VarSet vs(std::initializer_list<const char*> names) {
  VarSet out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

struct TwoTerm {
  VarSet A1, B1, C1;  // may be empty A1 for single-term bounds
  VarSet A2, B2, C2;
  bool has_second = false;
};

// In-band mutual-information structure of each fixed bound.
TwoTerm term_spec(BoundKind k) {
  TwoTerm t;
  switch (k) {
    case BoundKind::CutR1a:
      t.A1 = vs({"X1", "X2", "X4"}); t.B1 = vs({"Y3"}); t.C1 = vs({"X3"});
      break;
    case BoundKind::CutR1b:
      t.A1 = vs({"X1", "X4"}); t.B1 = vs({"Y2", "Y3"}); t.C1 = vs({"X2", "X3"});
      break;
    case BoundKind::CutR1c:
      t.A1 = vs({"X1"}); t.B1 = vs({"Y2", "Y3", "Y4"});
      t.C1 = vs({"X2", "X3", "X4"});
      break;
    case BoundKind::CutR2a:
      t.A1 = vs({"X1", "X2", "X3"}); t.B1 = vs({"Y4"}); t.C1 = vs({"X4"});
      break;
    case BoundKind::CutR2b:
      t.A1 = vs({"X2", "X3"}); t.B1 = vs({"Y1", "Y4"}); t.C1 = vs({"X4", "X1"});
      break;
    case BoundKind::CutR2c:
      t.A1 = vs({"X2"}); t.B1 = vs({"Y1", "Y3", "Y4"});
      t.C1 = vs({"X4", "X1", "X3"});
      break;
    case BoundKind::CutSum:
      t.A1 = vs({"X1", "X2"}); t.B1 = vs({"Y3", "Y4"}); t.C1 = vs({"X4", "X3"});
      break;
    case BoundKind::SumRateA:
      t.A1 = vs({"X1"}); t.B1 = vs({"Y3", "Y2"});
      t.C1 = vs({"Y4", "X2", "X3", "X4"});
      t.A2 = vs({"X1", "X2", "X3"}); t.B2 = vs({"Y4"}); t.C2 = vs({"X4"});
      t.has_second = true;
      break;
    case BoundKind::SumRateB:
      t.A1 = vs({"X2"}); t.B1 = vs({"Y4", "Y1"});
      t.C1 = vs({"Y3", "X1", "X3", "X4"});
      t.A2 = vs({"X1", "X2", "X4"}); t.B2 = vs({"Y3"}); t.C2 = vs({"X3"});
      t.has_second = true;
      break;
    default:
      throw std::invalid_argument("term_spec: not a fixed two-user bound");
  }
  return t;
}

// Out-of-band budget in bits. Source-node capacities under the tighter
// conditionings take the declared delta fraction; destination-node
// capacities crossing the cut count in full.
double oob_budget(const ChannelParams& ch, BoundKind k, const DeltaSpec& d) {
  const auto C = [&](int node) { return ch.C(node - 1); };
  switch (k) {
    case BoundKind::CutR1a: return C(3);
    case BoundKind::CutR1b: return d.delta1 * C(2) + C(3);
    case BoundKind::CutR1c: return d.delta2 * C(2) + C(3) + C(4);
    case BoundKind::CutR2a: return C(4);
    case BoundKind::CutR2b: return d.delta1 * C(1) + C(4);
    case BoundKind::CutR2c: return d.delta2 * C(1) + C(3) + C(4);
    case BoundKind::CutSum: return C(3) + C(4);
    case BoundKind::SumRateA: return d.delta2 * C(2) + C(4);
    case BoundKind::SumRateB: return d.delta2 * C(1) + C(3);
    default: return 0.0;
  }
}

double inband_value(const JointCov& jc, const TwoTerm& t) {
  double v = mutual_info(jc, t.A1, t.B1, t.C1);
  if (t.has_second) v += mutual_info(jc, t.A2, t.B2, t.C2);
  return v;
}

BoundValue make_value(BoundId id, double inband, double budget) {
  BoundValue bv;
  bv.id = std::move(id);
  bv.inband_bits = inband;
  bv.oob_budget_bits = budget;
  bv.total_bits = inband + budget;
  return bv;
}

void check_two_user(const ChannelParams& ch) {
  if (ch.K != 2)
    throw std::invalid_argument("fixed bound set requires K = 2");
}

}  // namespace

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::CutR1a: return "cut-r1a";
    case BoundKind::CutR1b: return "cut-r1b";
    case BoundKind::CutR1c: return "cut-r1c";
    case BoundKind::CutR2a: return "cut-r2a";
    case BoundKind::CutR2b: return "cut-r2b";
    case BoundKind::CutR2c: return "cut-r2c";
    case BoundKind::CutSum: return "cut-sum";
    case BoundKind::SumRateA: return "sum-rate-a";
    case BoundKind::SumRateB: return "sum-rate-b";
    case BoundKind::GenericCut: return "generic-cut";
    case BoundKind::MimoUltimate: return "mimo-ultimate";
  }
  return "?";
}

std::vector<BoundValue> eval_cutset(const ChannelParams& ch, const MatrixXcd& Q,
                                    const DeltaSpec& deltas) {
  check_two_user(ch);
  JointCov jc = joint_covariance(ch, Q);
  std::vector<BoundValue> out;
  for (BoundKind k : {BoundKind::CutR1a, BoundKind::CutR1b, BoundKind::CutR1c,
                      BoundKind::CutR2a, BoundKind::CutR2b, BoundKind::CutR2c,
                      BoundKind::CutSum}) {
    out.push_back(make_value(BoundId::of(k), inband_value(jc, term_spec(k)),
                             oob_budget(ch, k, deltas)));
  }
  return out;
}

std::vector<BoundValue> eval_sum_rate_pair(const ChannelParams& ch, const MatrixXcd& Q,
                                  const DeltaSpec& deltas) {
  check_two_user(ch);
  JointCov jc = joint_covariance(ch, Q);
  std::vector<BoundValue> out;
  out.push_back(make_value(BoundId::of(BoundKind::SumRateA),
                           inband_value(jc, term_spec(BoundKind::SumRateA)),
                           oob_budget(ch, BoundKind::SumRateA, deltas)));
  // The second bound is defined as the first under the user-pair
  // relabeling, so it is evaluated exactly that way; the swap symmetry
  // then holds to the last bit instead of up to eigensolver noise.
  JointCov js = joint_covariance(swap_users(ch), swap_users(Q));
  out.push_back(make_value(BoundId::of(BoundKind::SumRateB),
                           inband_value(js, term_spec(BoundKind::SumRateA)),
                           oob_budget(ch, BoundKind::SumRateB, deltas)));
  return out;
}

BoundValue eval_generic_cut(const ChannelParams& ch, const MatrixXcd& Q,
                            const CutSpec& cut, const DeltaSpec&) {
  const int n = ch.nodes();
  std::vector<bool> in_S(n + 1, false);
  for (int s : cut.S) {
    if (s < 1 || s > n) throw std::invalid_argument("cut node out of range");
    in_S[s] = true;
  }
  const size_t m = cut.S.size();
  if (m == 0 || m == static_cast<size_t>(n))
    throw std::invalid_argument("cut must be a proper nonempty subset");

  VarSet A, B, C;
  double budget = 0.0;
  for (int i = 1; i <= n; ++i) {
    if (in_S[i]) {
      A.push_back("X" + std::to_string(i));
    } else {
      B.push_back("Y" + std::to_string(i));
      C.push_back("X" + std::to_string(i));
      budget += ch.C(i - 1);
    }
  }
  JointCov jc = joint_covariance(ch, Q);
  const double inband = B.empty() ? 0.0 : mutual_info(jc, A, B, C);
  return make_value(BoundId::generic(cut), inband, budget);
}

// ---------------------------------------------------------------------------
// Input-covariance search
// ---------------------------------------------------------------------------

namespace {

// Q = (diag(sqrt(P)) L)(diag(sqrt(P)) L)^T where L is lower triangular with
// unit-norm rows built from spherical angles; diag(Q) = P holds exactly.
// Real-valued: gains default to phase 0, so a real maximizer suffices.
class CholeskyAngles {
 public:
  explicit CholeskyAngles(const VectorXd& P) : P_(P), n_(static_cast<int>(P.size())) {}

  int num_params() const { return n_ * (n_ - 1) / 2; }

  MatrixXd covariance(const std::vector<double>& theta) const {
    MatrixXd L = MatrixXd::Zero(n_, n_);
    int k = 0;
    for (int i = 0; i < n_; ++i) {
      // Direction on the i-sphere spanning coordinates 0..i.
      double prod = 1.0;
      for (int j = 0; j < i; ++j) {
        L(i, j) = prod * std::cos(theta[k]);
        prod *= std::sin(theta[k]);
        ++k;
      }
      L(i, i) = prod;
      const double scale = std::sqrt(P_(i));
      L.row(i) *= scale;
    }
    return L * L.transpose();
  }

 private:
  VectorXd P_;
  int n_;
};

// Index-based bound evaluation.
struct IdxTerm {
  std::vector<int> A, B, C, AC;
};

// Lower-triangular factor F with F F^T = Cov(X_rest | X_given), computed by
// a right-looking semidefinite Cholesky on [given; rest] with diagonal
// pivoting inside each block. Pivots at or below the relative floor are
// skipped, which amounts to not conditioning on (or not emitting) that
// direction; growth stays bounded because the matrix is PSD, so no
// large-number cancellation occurs at any scale. Rows of F follow the
// original order of `rest`.
MatrixXd cond_input_factor(const MatrixXd& Q, const std::vector<int>& given,
                           const std::vector<int>& rest) {
  const int c = static_cast<int>(given.size());
  const int m = c + static_cast<int>(rest.size());
  std::vector<int> perm;
  perm.reserve(m);
  perm.insert(perm.end(), given.begin(), given.end());
  perm.insert(perm.end(), rest.begin(), rest.end());
  MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = Q(perm[i], perm[j]);
  double maxd = 0.0;
  for (int k = 0; k < m; ++k) maxd = std::max(maxd, A(k, k));
  const double tau = 1e-12 * std::max(maxd, 1e-300);

  MatrixXd L = MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const int hi = k < c ? c : m;
    int p = k;
    for (int j = k; j < hi; ++j)
      if (A(j, j) > A(p, p)) p = j;
    if (p != k) {
      A.row(k).swap(A.row(p));
      A.col(k).swap(A.col(p));
      if (k > 0) L.row(k).head(k).swap(L.row(p).head(k));
      std::swap(perm[k], perm[p]);
    }
    const double d = A(k, k);
    if (d <= tau) continue;
    const double s = std::sqrt(d);
    L(k, k) = s;
    for (int i = k + 1; i < m; ++i) L(i, k) = A(i, k) / s;
    for (int i = k + 1; i < m; ++i)
      for (int j = k + 1; j <= i; ++j) {
        A(i, j) -= L(i, k) * L(j, k);
        A(j, i) = A(i, j);
      }
  }

  MatrixXd F = MatrixXd::Zero(rest.size(), m - c);
  for (int pos = c; pos < m; ++pos) {
    const int orig = perm[pos];
    const auto it = std::find(rest.begin(), rest.end(), orig);
    F.row(it - rest.begin()) = L.row(pos).segment(c, m - c);
  }
  return F;
}

class IndexedBound {
 public:
  IndexedBound(const ChannelParams& ch, const TwoTerm& t) { init(ch, t); }

  // Generic-cut constructor: a single mutual-information term.
  IndexedBound(const ChannelParams& ch, const VarSet& A, const VarSet& B,
               const VarSet& C) {
    TwoTerm t;
    t.A1 = A;
    t.B1 = B;
    t.C1 = C;
    init(ch, t);
  }

  double operator()(const MatrixXd& Q) const {
    double v = 0.0;
    for (const Term& t : terms_) {
      if (t.structured) {
        const MatrixXd F = cond_input_factor(Q, t.cond_inputs, t.free_inputs);
        const double tv = real_ ? gain_bits(t.bcy_r, F) - gain_bits(t.cy_r, F)
                                : gain_bits(t.bcy_c, F) - gain_bits(t.cy_c, F);
        v += std::max(tv, 0.0);
      } else {
        v += fallback_mi(Q, t.idx);
      }
    }
    return v;
  }

 private:
  // Whitened signal block of one output set: the term's value is
  // sum log2(1 + s^2) over the singular values of Lz^-1 H F, which stays
  // accurate for singular values from far below one up to the largest
  // gains because nothing large is ever subtracted.
  template <typename Mat>
  struct OutBlock {
    bool empty = true;
    Mat Lz;  // Cholesky factor of the noise covariance of the set
    Mat H;   // channel rows of the set over the free inputs
  };

  template <typename Mat>
  static double gain_bits(const OutBlock<Mat>& blk, const MatrixXd& F) {
    if (blk.empty) return 0.0;
    Mat G = blk.H * F.cast<typename Mat::Scalar>();
    blk.Lz.template triangularView<Eigen::Lower>().solveInPlace(G);
    Eigen::JacobiSVD<Mat> svd(G);
    double v = 0.0;
    for (double s : svd.singularValues()) v += std::log2(1.0 + s * s);
    return v;
  }

  struct Term {
    bool structured = false;
    std::vector<int> cond_inputs, free_inputs;  // partition of the inputs
    OutBlock<MatrixXd> bcy_r, cy_r;
    OutBlock<MatrixXcd> bcy_c, cy_c;
    IdxTerm idx;
  };

  void init(const ChannelParams& ch, const TwoTerm& t) {
    n_ = ch.nodes();
    real_ = ch.H.imag().cwiseAbs().maxCoeff() == 0.0 &&
            ch.SigmaZ.imag().cwiseAbs().maxCoeff() == 0.0;
    Hc_ = ch.H;
    Szc_ = ch.SigmaZ;
    if (real_) {
      Hr_ = ch.H.real();
      Szr_ = ch.SigmaZ.real();
    }
    add_term(t.A1, t.B1, t.C1);
    if (t.has_second) add_term(t.A2, t.B2, t.C2);
  }

  int label_index(const std::string& v) const {
    const int i = std::stoi(v.substr(1)) - 1;
    return v[0] == 'X' ? i : n_ + i;
  }

  template <typename Mat>
  void fill_block(OutBlock<Mat>& blk, const std::vector<int>& outs,
                  const std::vector<int>& free_inputs, const Mat& H,
                  const Mat& Sz) const {
    if (outs.empty()) return;
    Mat S(outs.size(), outs.size());
    for (size_t i = 0; i < outs.size(); ++i)
      for (size_t j = 0; j < outs.size(); ++j) S(i, j) = Sz(outs[i], outs[j]);
    Eigen::LLT<Mat> llt(S);
    if (llt.info() != Eigen::Success) throw DegenerateError(0.0);
    blk.Lz = llt.matrixL();
    blk.H.resize(outs.size(), free_inputs.size());
    for (size_t i = 0; i < outs.size(); ++i)
      for (size_t j = 0; j < free_inputs.size(); ++j)
        blk.H(i, j) = H(outs[i], free_inputs[j]);
    blk.empty = false;
  }

  void add_term(const VarSet& A, const VarSet& B, const VarSet& C) {
    Term term;
    std::vector<bool> input_known(n_, false), is_input_a(n_, false);
    std::vector<int> b_out, c_out;
    bool shaped = true;
    for (const auto& v : A) {
      const int i = label_index(v);
      if (i >= n_) shaped = false;
      else { input_known[i] = true; is_input_a[i] = true; }
    }
    for (const auto& v : B) {
      const int i = label_index(v);
      if (i < n_) shaped = false;
      else b_out.push_back(i - n_);
    }
    for (const auto& v : C) {
      const int i = label_index(v);
      if (i < n_) input_known[i] = true;
      else c_out.push_back(i - n_);
    }
    for (int i = 0; i < n_ && shaped; ++i) shaped = input_known[i];
    term.structured = shaped;
    if (shaped) {
      for (int i = 0; i < n_; ++i)
        (is_input_a[i] ? term.free_inputs : term.cond_inputs).push_back(i);
      std::vector<int> bcy = b_out;
      bcy.insert(bcy.end(), c_out.begin(), c_out.end());
      if (real_) {
        fill_block(term.bcy_r, bcy, term.free_inputs, Hr_, Szr_);
        fill_block(term.cy_r, c_out, term.free_inputs, Hr_, Szr_);
      } else {
        fill_block(term.bcy_c, bcy, term.free_inputs, Hc_, Szc_);
        fill_block(term.cy_c, c_out, term.free_inputs, Hc_, Szc_);
      }
    } else {
      for (const auto& v : A) term.idx.A.push_back(label_index(v));
      for (const auto& v : B) term.idx.B.push_back(label_index(v));
      for (const auto& v : C) term.idx.C.push_back(label_index(v));
      term.idx.AC = term.idx.A;
      term.idx.AC.insert(term.idx.AC.end(), term.idx.C.begin(),
                         term.idx.C.end());
    }
    terms_.push_back(std::move(term));
  }

  double fallback_mi(const MatrixXd& Q, const IdxTerm& t) const {
    double v;
    if (real_) {
      MatrixXd M(2 * n_, 2 * n_);
      M.topLeftCorner(n_, n_) = Q;
      M.topRightCorner(n_, n_) = Q * Hr_.transpose();
      M.bottomLeftCorner(n_, n_) = Hr_ * Q;
      M.bottomRightCorner(n_, n_) = Hr_ * Q * Hr_.transpose() + Szr_;
      v = detail::cond_logdet(M, t.B, t.C) - detail::cond_logdet(M, t.B, t.AC);
    } else {
      MatrixXcd Qc = Q.cast<std::complex<double>>();
      MatrixXcd M(2 * n_, 2 * n_);
      M.topLeftCorner(n_, n_) = Qc;
      M.topRightCorner(n_, n_) = Qc * Hc_.adjoint();
      M.bottomLeftCorner(n_, n_) = Hc_ * Qc;
      M.bottomRightCorner(n_, n_) = Hc_ * Qc * Hc_.adjoint() + Szc_;
      v = detail::cond_logdet(M, t.B, t.C) - detail::cond_logdet(M, t.B, t.AC);
    }
    return (v < 0.0 && v > -1e-9) ? 0.0 : v;
  }

  int n_ = 0;
  bool real_ = true;
  MatrixXd Hr_, Szr_;
  MatrixXcd Hc_, Szc_;
  std::vector<Term> terms_;
};

struct SearchResult {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> theta;
  long evaluations = 0;
  bool converged = true;
};

// Maximize objective(theta + t * dir) over t, starting with step h.
// Brackets by doubling, then refines with parabolic interpolation and a
// bisection fallback. Updates theta in place and returns the new value.
template <typename F>
double line_max(const F& objective, std::vector<double>& theta,
                const std::vector<double>& dir, double f0, double h,
                int max_iters, long& evaluations) {
  auto at = [&](double t) {
    std::vector<double> y = theta;
    for (size_t i = 0; i < y.size(); ++i) y[i] += t * dir[i];
    ++evaluations;
    return objective(y);
  };
  double lo, mid, hi, flo, fmid, fhi;
  double t1 = h, f1 = at(t1);
  if (f1 <= f0 && evaluations < max_iters) {
    const double f1r = f1;
    t1 = -h;
    f1 = at(t1);
    if (f1 <= f0) {
      // Both probes below the start: the maximum sits inside (-h, h).
      lo = -h; mid = 0.0; hi = h;
      flo = f1; fmid = f0; fhi = f1r;
      goto refine;
    }
  }
  if (f1 <= f0) return f0;
  // March in the improving direction with doubling steps until the value
  // drops, which brackets the maximum.
  lo = 0.0; flo = f0;
  mid = t1; fmid = f1;
  hi = 2.0 * t1; fhi = at(hi);
  while (fhi > fmid && evaluations < max_iters) {
    lo = mid; flo = fmid;
    mid = hi; fmid = fhi;
    hi = 2.0 * hi;
    fhi = at(hi);
  }
refine:
  for (int it = 0; it < 24 && evaluations < max_iters; ++it) {
    const double width = hi - lo;
    if (width < 1e-10 * (1.0 + std::abs(mid))) break;
    // Parabola through the three bracket points; fall back to bisecting
    // the larger half when the fit degenerates or leaves the bracket.
    const double d1 = (mid - lo) * (fmid - fhi);
    const double d2 = (mid - hi) * (fmid - flo);
    double t = 0.5 * (mid + (mid - lo > hi - mid ? lo : hi));
    const double denom = 2.0 * (d1 - d2);
    if (std::abs(denom) > 0.0) {
      const double cand = mid - ((mid - lo) * d1 - (mid - hi) * d2) / denom;
      if (cand > lo + 1e-3 * width && cand < hi - 1e-3 * width &&
          std::abs(cand - mid) > 1e-12 * (1.0 + std::abs(mid)))
        t = cand;
    }
    const double ft = at(t);
    if (ft > fmid) {
      if (t < mid) { hi = mid; fhi = fmid; }
      else         { lo = mid; flo = fmid; }
      mid = t; fmid = ft;
    } else {
      if (t < mid) { lo = t; flo = ft; }
      else         { hi = t; fhi = ft; }
    }
  }
  for (size_t i = 0; i < theta.size(); ++i) theta[i] += mid * dir[i];
  return fmid;
}

// Two-phase ascent from a random start. A fixed-step pattern search over
// the coordinate axes handles the global phase cheaply, then a direction-
// set polish with parabolic line searches drives the local error well
// below the requested tolerance; the polish replaces the most productive
// direction with the net move of each sweep, which straightens out
// valleys that no coordinate axis follows.
template <typename F>
SearchResult coordinate_search(const F& objective, int nparam,
                               std::mt19937_64& rng, int max_iters,
                               double tol) {
  SearchResult res;
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  std::vector<double> theta(nparam);
  for (double& t : theta) t = unif(rng);

  double f = objective(theta);
  ++res.evaluations;

  const long pattern_budget = max_iters / 2;
  double step = 0.7;
  while (step > 1e-3 && res.evaluations < pattern_budget) {
    bool improved = false;
    for (int i = 0; i < nparam && res.evaluations < pattern_budget; ++i) {
      for (double dir : {+1.0, -1.0}) {
        std::vector<double> cand = theta;
        cand[i] += dir * step;
        const double fc = objective(cand);
        ++res.evaluations;
        if (fc > f) {
          f = fc;
          theta = std::move(cand);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  if (!std::isfinite(f)) {
    // Fully masked-out configurations can make whole regions degenerate;
    // without a finite foothold there is nothing to polish.
    res.best = f;
    res.theta = std::move(theta);
    res.converged = false;
    return res;
  }

  std::vector<std::vector<double>> dirs(nparam,
                                        std::vector<double>(nparam, 0.0));
  for (int i = 0; i < nparam; ++i) dirs[i][i] = 1.0;

  double h = 2.0 * std::max(step, 1e-2);
  const double ftol = std::max(tol * 1e-4, 1e-13);
  res.converged = false;
  while (res.evaluations < max_iters) {
    const double f_start = f;
    const std::vector<double> theta_start = theta;
    int biggest = 0;
    double biggest_gain = 0.0;
    for (int i = 0; i < nparam && res.evaluations < max_iters; ++i) {
      const double before = f;
      f = line_max(objective, theta, dirs[i], f, h, max_iters,
                   res.evaluations);
      if (f - before > biggest_gain) {
        biggest_gain = f - before;
        biggest = i;
      }
    }
    const double gain = f - f_start;
    if (gain <= ftol * (1.0 + std::abs(f))) {
      if (h <= 1e-4) {
        res.converged = true;
        break;
      }
      h *= 0.25;
      // Replacements can leave the direction set near parallel, which
      // stalls sweeps at non-stationary points; start the finer scale
      // from the coordinate axes again.
      for (int i = 0; i < nparam; ++i) {
        std::fill(dirs[i].begin(), dirs[i].end(), 0.0);
        dirs[i][i] = 1.0;
      }
      continue;
    }
    // Swap the best-performing direction for the sweep's net displacement
    // and search along it once.
    std::vector<double> net(nparam);
    double norm = 0.0;
    for (int i = 0; i < nparam; ++i) {
      net[i] = theta[i] - theta_start[i];
      norm += net[i] * net[i];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-14 && res.evaluations < max_iters) {
      for (double& v : net) v /= norm;
      dirs[biggest] = dirs.back();
      dirs.back() = net;
      f = line_max(objective, theta, dirs.back(), f, h, max_iters,
                   res.evaluations);
    }
  }
  res.best = f;
  res.theta = std::move(theta);
  return res;
}

struct InnerMax {
  double value = -std::numeric_limits<double>::infinity();
  MatrixXd Q;
  OptimizerTrace trace;
};

template <typename Eval>
InnerMax max_over_q(const Eval& eval, const VectorXd& P, int restarts,
                    const OptimizerConfig& cfg) {
  CholeskyAngles param(P);
  InnerMax out;
  out.trace.restarts = restarts;
  SearchResult best_sr;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ull + 0x100ull + r);
    auto obj = [&](const std::vector<double>& th) {
      // Engine degeneracies make the point a non-candidate, not an error.
      try {
        return eval(param.covariance(th));
      } catch (const DegenerateError&) {
        return -std::numeric_limits<double>::infinity();
      }
    };
    SearchResult sr =
        coordinate_search(obj, param.num_params(), rng, cfg.max_iters, cfg.tol);
    out.trace.evaluations += sr.evaluations;
    out.trace.best_per_restart.push_back(sr.best);
    out.trace.converged = out.trace.converged && sr.converged;
    if (sr.best > out.value) {
      out.value = sr.best;
      best_sr = sr;
    }
  }
  if (best_sr.theta.empty()) {
    // Every restart came back non-finite; report uncorrelated inputs
    // rather than dereferencing a best point that does not exist.
    out.Q = MatrixXd(P.asDiagonal());
    return out;
  }
  out.Q = param.covariance(best_sr.theta);
  return out;
}

std::vector<double> corr_grid_points(int n) {
  std::vector<double> pts;
  if (n <= 1) return {0.0};
  for (int i = 0; i < n; ++i)
    pts.push_back(-0.99 + (1.98 * i) / (n - 1));
  return pts;
}

ChannelParams with_noise_corr(const ChannelParams& ch,
                              const std::vector<std::pair<int, int>>& entries,
                              const std::vector<double>& rho) {
  ChannelParams out = ch;
  for (size_t e = 0; e < entries.size(); ++e) {
    const int i = entries[e].first - 1, j = entries[e].second - 1;
    out.SigmaZ(i, j) = rho[e];
    out.SigmaZ(j, i) = rho[e];
  }
  return out;
}

bool sigma_psd(const ChannelParams& ch) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ch.SigmaZ, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-12;
}

}  // namespace

BoundReport maximize(const ChannelParams& ch, const BoundId& id,
                     const OptimizerConfig& cfg, const DeltaSpec& deltas) {
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (id.kind == BoundKind::MimoUltimate) return mimo_ultimate(ch, cfg);

  auto make_bound = [&](const ChannelParams& c) -> IndexedBound {
    if (id.kind != BoundKind::GenericCut) return IndexedBound(c, term_spec(id.kind));
    const int n = c.nodes();
    std::vector<bool> in_S(n + 1, false);
    for (int s : id.cut.S) in_S[s] = true;
    VarSet A, B, C;
    for (int i = 1; i <= n; ++i) {
      if (in_S[i]) A.push_back("X" + std::to_string(i));
      else {
        B.push_back("Y" + std::to_string(i));
        C.push_back("X" + std::to_string(i));
      }
    }
    return IndexedBound(c, A, B, C);
  };
  const double budget = id.kind == BoundKind::GenericCut
                            ? eval_generic_cut(ch, MatrixXcd::Zero(ch.nodes(), ch.nodes()),
                                               id.cut, deltas).oob_budget_bits
                            : oob_budget(ch, id.kind, deltas);

  // Grid scan over declared free noise correlations: the bound is valid at
  // every grid point, so the smallest maximized value is kept. A short pilot
  // run ranks the grid; the winner gets the full restart budget.
  std::vector<double> chosen_rho(cfg.noise_corr_entries.size(), 0.0);
  OptimizerTrace pilot_trace;
  if (!cfg.noise_corr_entries.empty()) {
    const auto pts = corr_grid_points(cfg.corr_grid);
    std::vector<double> rho(cfg.noise_corr_entries.size(), 0.0);
    double best_pilot = std::numeric_limits<double>::infinity();
    // Cartesian product over declared entries.
    std::vector<size_t> idx(cfg.noise_corr_entries.size(), 0);
    while (true) {
      for (size_t e = 0; e < idx.size(); ++e) rho[e] = pts[idx[e]];
      ChannelParams c = with_noise_corr(ch, cfg.noise_corr_entries, rho);
      if (sigma_psd(c)) {
        IndexedBound bound = make_bound(c);
        InnerMax m = max_over_q(bound, ch.P,
                                std::min(cfg.pilot_restarts, cfg.restarts), cfg);
        pilot_trace.evaluations += m.trace.evaluations;
        if (m.value < best_pilot) {
          best_pilot = m.value;
          chosen_rho = rho;
        }
      }
      size_t e = 0;
      for (; e < idx.size(); ++e) {
        if (++idx[e] < pts.size()) break;
        idx[e] = 0;
      }
      if (e == idx.size()) break;
    }
  }

  ChannelParams c = with_noise_corr(ch, cfg.noise_corr_entries, chosen_rho);
  IndexedBound bound = make_bound(c);
  InnerMax m = max_over_q(bound, ch.P, cfg.restarts, cfg);

  BoundReport rep;
  rep.value = make_value(id, m.value, budget);
  rep.Q_star = m.Q.cast<std::complex<double>>();
  rep.trace = m.trace;
  rep.trace.restarts += pilot_trace.restarts;
  rep.trace.evaluations += pilot_trace.evaluations;
  rep.trace.noise_corr = chosen_rho;
  return rep;
}

BoundReport mimo_ultimate(const ChannelParams& ch, const OptimizerConfig& cfg) {
  check_two_user(ch);
  const MatrixXcd Hd = ch.H.block(2, 0, 2, 2);
  const MatrixXcd Sz = ch.SigmaZ.block(2, 2, 2, 2);
  VectorXd P2 = ch.P.head(2);
  auto ev = [&](const MatrixXd& Q) {
    MatrixXcd A = MatrixXcd::Identity(2, 2) +
                  Sz.inverse() * Hd * Q.cast<std::complex<double>>() * Hd.adjoint();
    const std::complex<double> det = A.determinant();
    return std::log2(std::max(det.real(), 1e-300));
  };
  InnerMax m = max_over_q(ev, P2, cfg.restarts, cfg);
  BoundReport rep;
  rep.value = make_value(BoundId::of(BoundKind::MimoUltimate), m.value,
                         ch.C(2) + ch.C(3));
  rep.Q_star = m.Q.cast<std::complex<double>>();
  rep.trace = m.trace;
  return rep;
}

SumRateReport sum_rate_upper(const ChannelParams& ch,
                             const OptimizerConfig& cfg,
                             const DeltaSpec& deltas) {
  check_two_user(ch);
  SumRateReport out;
  auto run = [&](BoundKind k) -> const BoundReport& {
    auto [it, fresh] = out.reports.emplace(bound_kind_name(k), BoundReport{});
    if (fresh) {
      it->second = k == BoundKind::MimoUltimate
                       ? mimo_ultimate(ch, cfg)
                       : maximize(ch, BoundId::of(k), cfg, deltas);
    }
    return it->second;
  };

  auto add = [&](const std::string& name, double v) {
    out.constituents.emplace_back(name, v);
  };

  add("cut-sum", run(BoundKind::CutSum).value.total_bits);
  add("sum-rate-a", run(BoundKind::SumRateA).value.total_bits);
  add("sum-rate-b", run(BoundKind::SumRateB).value.total_bits);
  add("mimo-ultimate", run(BoundKind::MimoUltimate).value.total_bits);
  const BoundKind r1[] = {BoundKind::CutR1a, BoundKind::CutR1b, BoundKind::CutR1c};
  const BoundKind r2[] = {BoundKind::CutR2a, BoundKind::CutR2b, BoundKind::CutR2c};
  for (BoundKind a : r1)
    for (BoundKind b : r2)
      add(std::string(bound_kind_name(a)) + "+" + bound_kind_name(b),
          run(a).value.total_bits + run(b).value.total_bits);

  out.headline_bits = std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : out.constituents)
    out.headline_bits = std::min(out.headline_bits, v);
  return out;
}

}  // namespace coopifc
