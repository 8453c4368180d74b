#include "gaussinfo.hpp"

#include <algorithm>
#include <cmath>

namespace coopifc {

namespace {

constexpr double kLog2PiE = 3.0941911703612822;  // log2(pi*e)

// Relative eigenvalue cutoff separating genuine covariance directions from
// numerically singular ones, applied after diagonal equilibration. An
// eigenvalue kept just above the cutoff carries a relative error of roughly
// machine epsilon over the cutoff, so the cutoff also caps how much noise a
// search over input covariances can harvest near a rank boundary; 1e-8
// keeps that below about 1e-7 bits per entropy term.
constexpr double kRankCutoff = 1e-8;

template <typename Mat>
Mat submatrix(const Mat& M, const std::vector<int>& rows,
              const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) out(r, c) = M(rows[r], cols[c]);
  return out;
}

struct PLogDet {
  double value = 0.0;  // log2 pseudo-determinant
  int rank = 0;
};

// log2 pseudo-determinant of a PSD submatrix of M. The submatrix is
// equilibrated to unit diagonal first, which keeps the eigenvalues accurate
// across widely different coordinate scales; zero-variance coordinates drop
// out exactly, and eigenvalues below the relative cutoff do not count
// towards the rank.
template <typename Mat>
PLogDet plogdet(const Mat& M, const std::vector<int>& idx) {
  PLogDet out;
  std::vector<int> live;
  for (int i : idx) {
    const double d = std::real(M(i, i));
    if (d > 0.0) {
      live.push_back(i);
      out.value += std::log2(d);
    }
  }
  if (live.empty()) return out;
  Mat S = submatrix(M, live, live);
  Eigen::VectorXd scale(live.size());
  for (size_t i = 0; i < live.size(); ++i)
    scale(i) = 1.0 / std::sqrt(std::real(S(i, i)));
  S = (scale.asDiagonal() * S * scale.asDiagonal()).eval();
  S = ((S + S.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  // One fixed cutoff for every matrix: a marginal and the joint it embeds
  // in must agree on whether a shared near-null direction counts, or the
  // rank bookkeeping in schur_logdet would report a spurious degeneracy.
  const double cutoff = kRankCutoff;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) {
      out.value += std::log2(ev(i));
      ++out.rank;
    }
  }
  return out;
}

// log2 det of the conditional covariance of the targets given the
// conditioning set, computed as a pseudo-determinant difference
// log2 pdet(M_{TG}) - log2 pdet(M_G). A rank deficit between the two
// matrices means some target direction is deterministic given the
// conditioning (or the instance sits on a numerical rank boundary); either
// way no finite conditional entropy exists and the caller must not trust a
// number, so it is reported as degeneracy.
template <typename Mat>
double schur_logdet(const Mat& M, const std::vector<int>& t,
                    const std::vector<int>& g) {
  std::vector<int> tg = t;
  tg.insert(tg.end(), g.begin(), g.end());
  const PLogDet joint = plogdet(M, tg);
  const PLogDet given = g.empty() ? PLogDet{} : plogdet(M, g);
  if (joint.rank - given.rank != static_cast<int>(t.size()))
    throw DegenerateError(0.0);
  return joint.value - given.value;
}

}  // namespace

namespace detail {

double cond_logdet(const MatrixXd& M, const std::vector<int>& target,
                   const std::vector<int>& given) {
  return schur_logdet(M, target, given);
}

double cond_logdet(const MatrixXcd& M, const std::vector<int>& target,
                   const std::vector<int>& given) {
  return schur_logdet(M, target, given);
}

}  // namespace detail

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

JointCov JointCov::make(MatrixXcd M, std::vector<std::string> labels) {
  JointCov jc;
  jc.M = std::move(M);
  jc.labels = std::move(labels);
  if (jc.M.rows() != jc.M.cols() ||
      jc.M.rows() != static_cast<Eigen::Index>(jc.labels.size()))
    throw std::invalid_argument("JointCov: dimension/label mismatch");
  jc.real = jc.M.imag().cwiseAbs().maxCoeff() == 0.0;
  for (size_t i = 0; i < jc.labels.size(); ++i) {
    if (!jc.index.emplace(jc.labels[i], static_cast<int>(i)).second)
      throw std::invalid_argument("JointCov: duplicate label " + jc.labels[i]);
  }
  return jc;
}

int JointCov::at(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end())
    throw std::invalid_argument("unknown variable " + label);
  return it->second;
}

JointCov joint_covariance(const ChannelParams& ch, const MatrixXcd& Q) {
  const int n = ch.nodes();
  if (Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("input covariance has wrong dimensions");
  {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()))
      throw std::invalid_argument("input covariance not PSD");
  }
  MatrixXcd M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = Q;
  M.topRightCorner(n, n) = Q * ch.H.adjoint();
  M.bottomLeftCorner(n, n) = ch.H * Q;
  M.bottomRightCorner(n, n) = ch.H * Q * ch.H.adjoint() + ch.SigmaZ;
  std::vector<std::string> labels;
  labels.reserve(2 * n);
  for (int i = 0; i < n; ++i) labels.push_back("X" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i) labels.push_back("Y" + std::to_string(i + 1));
  return JointCov::make(std::move(M), std::move(labels));
}

double cond_entropy(const JointCov& jc, const VarSet& target,
                    const VarSet& given) {
  if (target.empty()) throw std::invalid_argument("empty target set");
  std::vector<int> t, g;
  for (const auto& v : target) t.push_back(jc.at(v));
  for (const auto& v : given) g.push_back(jc.at(v));
  double logdet;
  if (jc.real) {
    MatrixXd Mr = jc.M.real();
    logdet = schur_logdet(Mr, t, g);
  } else {
    logdet = schur_logdet(jc.M, t, g);
  }
  return static_cast<double>(t.size()) * kLog2PiE + logdet;
}

double mutual_info(const JointCov& jc, const VarSet& A, const VarSet& B,
                   const VarSet& C) {
  const double v = cond_entropy(jc, B, C) - cond_entropy(jc, B, set_union(A, C));
  if (v < 0.0 && v > -1e-9) return 0.0;
  return v;
}

}  // namespace coopifc
