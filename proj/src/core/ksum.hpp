#pragma once

#include <string>
#include <vector>

#include "gaussinfo.hpp"
#include "model.hpp"

namespace coopifc {

// One conditional-mutual-information term I(A; B | C) over node variables.
// A holds source inputs, B target outputs.
struct MITermSpec {
  VarSet A;
  VarSet B;
  VarSet C;
};

// A partial-sum-rate bound for users S on a K-pair network: the sum of
// |S| chained mutual-information terms.
struct SumBoundSpec {
  int K = 2;
  std::vector<int> S;  // ordered user indices, subset of [1..K]
  std::vector<MITermSpec> terms;
};

// Generates the term chain bounding R_{u1} + ... + R_{um} for S = (u1..um).
// Term j targets the j-th user's destination output plus, for j = 1, the
// outputs of the complement users, or, for j > 1, the previous user's source
// output; conditioning accumulates the earlier users' inputs, the complement
// users' inputs, and all earlier targets.
//
// `condition_on_dest_inputs` additionally conditions every term on the
// destination inputs X_{K+1}..X_{2K}, the behavior matching the two-user
// sum-rate bounds when destinations transmit; the plain chain conditions on
// source inputs only.
SumBoundSpec generate_terms(int K, const std::vector<int>& S,
                            bool condition_on_dest_inputs = false);

// One term per line, e.g. "I(X2,X3 ; Y6,Y1 | X1,X4,Y5,Y4)".
std::string render_terms(const SumBoundSpec& spec);

// Sum of the chain's mutual-information values on a Gaussian instance, plus
// the conservative out-of-band budget (sum of C_l over l in S).
struct KsumValue {
  double inband_bits = 0.0;
  double oob_budget_bits = 0.0;
  double total_bits = 0.0;
};

KsumValue eval_terms(const ChannelParams& ch, const MatrixXcd& Q,
                     const SumBoundSpec& spec);

// Recomputes the in-band value through the grouped alternating entropy sum
// sum_j h(B_j | C_j) - h(union B_j | all inputs) and returns the absolute
// discrepancy from eval_terms; the chain rule keeps it at numerical noise.
double consistency_check(const ChannelParams& ch, const MatrixXcd& Q,
                         const SumBoundSpec& spec);

}  // namespace coopifc
