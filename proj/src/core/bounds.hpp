#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gaussinfo.hpp"
#include "model.hpp"

namespace coopifc {

// One rate inequality of the two-user outer-bound set. The cut bounds come
// from the cut-set argument (the cut is listed next to each id); SumRateA and
// SumRateB are the two extra sum-rate inequalities, each a sum of two
// conditional-mutual-information terms. SumRateB maps to SumRateA under the
// user relabeling (1<->2, 3<->4).
enum class BoundKind {
  CutR1a,  // R1:    S={1,2,4} | {3}      I(X1,X2,X4; Y3 | X3)
  CutR1b,  // R1:    S={1,4}   | {2,3}    I(X1,X4; Y2,Y3 | X2,X3)
  CutR1c,  // R1:    S={1}     | {2,3,4}  I(X1; Y2,Y3,Y4 | X2,X3,X4)
  CutR2a,  // R2:    S={2,1,3} | {4}      I(X1,X2,X3; Y4 | X4)
  CutR2b,  // R2:    S={2,3}   | {1,4}    I(X2,X3; Y1,Y4 | X4,X1)
  CutR2c,  // R2:    S={2}     | {1,3,4}  I(X2; Y1,Y3,Y4 | X4,X1,X3)
  CutSum,  // R1+R2: S={1,2}   | {3,4}    I(X1,X2; Y3,Y4 | X4,X3)
  SumRateA,  // R1+R2: I(X1; Y3,Y2 | Y4,X2,X3,X4) + I(X1,X2,X3; Y4 | X4)
  SumRateB,  // R1+R2: I(X2; Y4,Y1 | Y3,X1,X3,X4) + I(X1,X2,X4; Y3 | X3)
  GenericCut,
  MimoUltimate,
};

struct CutSpec {
  std::vector<int> S;  // 1-based node indices, proper nonempty subset
};

struct BoundId {
  BoundKind kind = BoundKind::CutSum;
  CutSpec cut;  // used only when kind == GenericCut

  static BoundId of(BoundKind k) { return BoundId{k, {}}; }
  static BoundId generic(CutSpec c) {
    return BoundId{BoundKind::GenericCut, std::move(c)};
  }
};

const char* bound_kind_name(BoundKind k);

// Out-of-band budget policy. The entropy of an out-of-band cooperation
// signal received at a source node is at most its link capacity C_l; under
// tighter conditioning the budget shrinks to a declared fraction of C_l.
// delta1 applies to the two-output cut bounds per user (CutR1b/CutR2b),
// delta2 to the three-output cuts (CutR1c/CutR2c) and to both sum-rate
// bounds. Destination-node capacities crossing a cut are always counted in
// full. Defaults are the conservative full-capacity budgets.
struct DeltaSpec {
  double delta1 = 1.0;
  double delta2 = 1.0;
};

struct BoundValue {
  BoundId id;
  double inband_bits = 0.0;
  double oob_budget_bits = 0.0;
  double total_bits = 0.0;
};

// The seven cut bounds at a fixed Gaussian input covariance.
std::vector<BoundValue> eval_cutset(const ChannelParams& ch, const MatrixXcd& Q,
                                    const DeltaSpec& deltas = {});

// The two sum-rate bounds at a fixed Gaussian input covariance.
// Result order: {SumRateA, SumRateB}.
std::vector<BoundValue> eval_sum_rate_pair(const ChannelParams& ch, const MatrixXcd& Q,
                                  const DeltaSpec& deltas = {});

// I(X(S); Y(Sc) | X(Sc)) plus the capacities of out-of-band links entering
// Sc. An empty output set yields the budget alone.
BoundValue eval_generic_cut(const ChannelParams& ch, const MatrixXcd& Q,
                            const CutSpec& cut, const DeltaSpec& deltas = {});

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 2000;  // objective evaluations per restart
  double tol = 1e-6;
  std::uint64_t seed = 0;
  // Off-diagonal SigmaZ entries (1-based node pairs) to minimize the bound
  // over; which entries are legitimately free is mode dependent and left to
  // the caller. Each entry is searched on a uniform grid in [-0.99, 0.99].
  std::vector<std::pair<int, int>> noise_corr_entries;
  int corr_grid = 11;
  int pilot_restarts = 4;  // restarts used while scanning the grid
};

struct OptimizerTrace {
  int restarts = 0;
  long evaluations = 0;
  std::vector<double> best_per_restart;
  std::vector<double> noise_corr;  // chosen value per declared entry
  bool converged = true;
};

struct BoundReport {
  BoundValue value;
  MatrixXcd Q_star;
  OptimizerTrace trace;
};

// Approximate maximum of one bound over the Gaussian input covariance with
// diag(Q) = P (full power). Q is parameterized by a row-rescaled
// lower-triangular factor and searched with derivative-free coordinate
// descent from multiple seeded random starts; with declared noise-correlation
// entries the reported value is additionally minimized over the grid.
BoundReport maximize(const ChannelParams& ch, const BoundId& id,
                     const OptimizerConfig& cfg, const DeltaSpec& deltas = {});

// max over 2x2 Q with diag(Q) = (P1, P2) of log2 det(I + Hd Q Hd^H) plus
// C3 + C4, where Hd is the destination-rows/source-columns submatrix.
BoundReport mimo_ultimate(const ChannelParams& ch, const OptimizerConfig& cfg);

struct SumRateReport {
  double headline_bits = 0.0;
  // All constituent sum-rate upper bounds; the headline is their minimum.
  std::vector<std::pair<std::string, double>> constituents;
  std::map<std::string, BoundReport> reports;  // keyed by bound kind name
};

// min over every valid sum-rate combination: CutSum, SumRateA, SumRateB, the
// MIMO cooperation limit, and each pairing of one R1 cut with one R2 cut.
// Every constituent is maximized separately, which keeps the minimum a valid
// (possibly loose) upper bound.
SumRateReport sum_rate_upper(const ChannelParams& ch,
                             const OptimizerConfig& cfg,
                             const DeltaSpec& deltas = {});

}  // namespace coopifc
