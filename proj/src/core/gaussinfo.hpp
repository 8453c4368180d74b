#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "model.hpp"

namespace coopifc {

// Proper-complex convention throughout: h(V) = log2 det(pi*e*Sigma) bits per
// channel use, so a scalar link with |h|^2 P = snr gives I = log2(1+snr).

// Conditional covariance (numerically) singular beyond tolerance.
struct DegenerateError : std::runtime_error {
  double eigenvalue;
  explicit DegenerateError(double ev)
      : std::runtime_error("degenerate conditional distribution (eigenvalue " +
                           std::to_string(ev) + ")"),
        eigenvalue(ev) {}
};

// Ordered set of variable identifiers, e.g. {"X1","Y3"}.
using VarSet = std::vector<std::string>;

VarSet set_union(const VarSet& a, const VarSet& b);

// Second-order statistics of a jointly Gaussian vector over labeled
// coordinates. `real` marks matrices with no imaginary part so evaluation can
// stay in real arithmetic.
struct JointCov {
  MatrixXcd M;
  std::vector<std::string> labels;
  bool real = false;
  std::unordered_map<std::string, int> index;

  static JointCov make(MatrixXcd M, std::vector<std::string> labels);
  int dim() const { return static_cast<int>(labels.size()); }
  int at(const std::string& label) const;
};

// Covariance of the stacked vector (X_1..X_2K, Y_1..Y_2K) with Y = HX + Z,
// X ~ N(0, Q) independent of Z ~ N(0, SigmaZ). Labels "X1".."Y2K".
// Out-of-band components are not represented here; they enter the bounds as
// additive capacity budgets.
JointCov joint_covariance(const ChannelParams& ch, const MatrixXcd& Q);

// h(target | given) in bits. Empty `given` gives the unconditional entropy.
// Throws DegenerateError when the conditional covariance is singular.
double cond_entropy(const JointCov& jc, const VarSet& target,
                    const VarSet& given);

// I(A; B | C) = h(B|C) - h(B|A,C), clamped below at 0 within -1e-9.
double mutual_info(const JointCov& jc, const VarSet& A, const VarSet& B,
                   const VarSet& C);

namespace detail {

// log2 det of the conditional covariance M_TT - M_TG pinv(M_GG) M_GT.
// Index-based hot path shared with the bound optimizer.
double cond_logdet(const MatrixXd& M, const std::vector<int>& target,
                   const std::vector<int>& given);
double cond_logdet(const MatrixXcd& M, const std::vector<int>& target,
                   const std::vector<int>& given);

}  // namespace detail

}  // namespace coopifc
