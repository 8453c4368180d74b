#include "ksum.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace coopifc {

namespace {

std::string xv(int i) { return "X" + std::to_string(i); }
std::string yv(int i) { return "Y" + std::to_string(i); }

void append(VarSet& vs, const VarSet& more) {
  for (const auto& v : more) vs.push_back(v);
}

}  // namespace

SumBoundSpec generate_terms(int K, const std::vector<int>& S,
                            bool condition_on_dest_inputs) {
  if (K < 2) throw std::invalid_argument("K must be >= 2");
  if (S.empty() || S.size() > static_cast<size_t>(K))
    throw std::invalid_argument("S must satisfy 1 <= |S| <= K");
  std::vector<bool> seen(K + 1, false);
  for (int u : S) {
    if (u < 1 || u > K) throw std::invalid_argument("user index out of range");
    if (seen[u]) throw std::invalid_argument("duplicate user index");
    seen[u] = true;
  }
  std::vector<int> T;  // complement users, ascending
  for (int v = 1; v <= K; ++v)
    if (!seen[v]) T.push_back(v);

  SumBoundSpec spec;
  spec.K = K;
  spec.S = S;
  const int m = static_cast<int>(S.size());
  for (int j = 0; j < m; ++j) {
    MITermSpec t;
    for (int i = j; i < m; ++i) t.A.push_back(xv(S[i]));
    t.B.push_back(yv(S[j] + K));
    if (j == 0) {
      for (int v : T) t.B.push_back(yv(v));
    } else {
      t.B.push_back(yv(S[j - 1]));
    }
    for (int i = 0; i < j; ++i) t.C.push_back(xv(S[i]));
    for (int v : T) t.C.push_back(xv(v));
    if (condition_on_dest_inputs)
      for (int v = K + 1; v <= 2 * K; ++v) t.C.push_back(xv(v));
    // Earlier targets, most recent first.
    for (int i = j - 1; i >= 0; --i) append(t.C, spec.terms[i].B);
    spec.terms.push_back(std::move(t));
  }
  return spec;
}

std::string render_terms(const SumBoundSpec& spec) {
  std::ostringstream os;
  auto list = [&](const VarSet& vs) {
    for (size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
  };
  for (const auto& t : spec.terms) {
    os << "I(";
    list(t.A);
    os << " ; ";
    list(t.B);
    if (!t.C.empty()) {
      os << " | ";
      list(t.C);
    }
    os << ")\n";
  }
  return os.str();
}

KsumValue eval_terms(const ChannelParams& ch, const MatrixXcd& Q,
                     const SumBoundSpec& spec) {
  if (ch.K != spec.K)
    throw std::invalid_argument("channel pair count does not match spec");
  JointCov jc = joint_covariance(ch, Q);
  KsumValue out;
  for (const auto& t : spec.terms)
    out.inband_bits += mutual_info(jc, t.A, t.B, t.C);
  for (int u : spec.S) out.oob_budget_bits += ch.C(u - 1);
  out.total_bits = out.inband_bits + out.oob_budget_bits;
  return out;
}

double consistency_check(const ChannelParams& ch, const MatrixXcd& Q,
                         const SumBoundSpec& spec) {
  JointCov jc = joint_covariance(ch, Q);
  double grouped = 0.0;
  VarSet all_targets;
  VarSet all_inputs;
  for (const auto& t : spec.terms) {
    grouped += cond_entropy(jc, t.B, t.C);
    append(all_targets, t.B);
    all_inputs = set_union(all_inputs, set_union(t.A, t.C));
  }
  // Keep only input variables in the final conditioning.
  VarSet inputs_only;
  for (const auto& v : all_inputs)
    if (v[0] == 'X') inputs_only.push_back(v);
  grouped -= cond_entropy(jc, all_targets, inputs_only);
  const double direct = eval_terms(ch, Q, spec).inband_bits;
  return std::abs(grouped - direct);
}

}  // namespace coopifc
