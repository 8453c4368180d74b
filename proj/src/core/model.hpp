#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace coopifc {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Full Gaussian channel description for a K-pair cooperative interference
// channel on 2K full-duplex nodes. Node i in [1:K] is a source, node i+K its
// destination. H(l,i) is the in-band amplitude gain from transmitter i to
// receiver l; C(l) is the capacity in bits/channel use of the out-of-band
// (noiseless, rate-limited) signal received at node l.
struct ChannelParams {
  int K = 2;
  MatrixXcd H;       // 2K x 2K, zero diagonal
  VectorXd P;        // 2K average powers, linear scale
  MatrixXcd SigmaZ;  // 2K x 2K Hermitian PSD, unit diagonal
  VectorXd C;        // 2K out-of-band capacities, bits/channel use

  int nodes() const { return 2 * K; }
};

// SNR-exponent parameterization of the symmetric two-user channel.
// Squared gains scale as snr^e for the exponent attached to each link class.
struct SymmetricParams {
  double snr = 1.0;
  double alpha = 0.0;        // interference link
  double alpha_tilde = 0.0;  // cross destination-to-source link (with gamma)
  double beta_s = 0.0;       // source-to-source link
  double beta_d = 0.0;       // destination-to-destination link
  double gamma = 0.0;        // destination-to-source link
  double kappa = 0.0;        // out-of-band capacity, fraction of log2(1+snr)
};

enum class CoopMode {
  NoCoop,
  InBandSource,
  OutOfBandSource,  // conferencing encoders
  OutputFeedback,
  RateLimitedFeedback,
  TwoWayLike,
  Ultimate,
};

const char* mode_name(CoopMode m);
std::optional<CoopMode> mode_from_name(const std::string& name);
std::vector<CoopMode> all_modes();

// Which in-band links a cooperation mode leaves active. Entry (l,i), 0-based,
// true iff transmitter i+1 reaches receiver l+1 in band.
using LinkMask = std::array<std::array<bool, 4>, 4>;

LinkMask full_mask();  // every off-diagonal link active

// A mode preset: exponent overrides plus the (Delta1, Delta2) budget
// fractions (in units of kappa) and the set of active in-band links.
struct ModedParams {
  CoopMode mode = CoopMode::NoCoop;
  SymmetricParams sym;
  double delta1 = 0.0;  // fraction of kappa, Delta1 <= kappa
  double delta2 = 0.0;  // fraction of kappa, Delta2 <= Delta1
  LinkMask mask = full_mask();
};

// Applies a cooperation-mode preset to a base parameter set. The mode's free
// exponent (if any) takes its value from the corresponding field of `base`;
// all other exponents are forced per the preset table.
//
// Ultimate sets beta_s = beta_d = infinity and is not buildable as a finite
// channel; it exists for the closed-form GDoF path.
ModedParams apply_mode(CoopMode mode, const SymmetricParams& base);

// Builds the K=2 symmetric Gaussian channel: powers normalized to 1, squared
// gains carry the snr^e scaling, SigmaZ = I, C = (k*log2(1+snr), same, 0, 0).
// Entries whose value does not affect the capacity region are set to 0, as
// are links disabled by `mask`.
ChannelParams build_symmetric(const SymmetricParams& sym,
                              const LinkMask& mask = full_mask());

// One diagnostic string per violated ChannelParams invariant; empty when the
// channel is well formed.
std::vector<std::string> validate_channel(const ChannelParams& ch);

// Relabeling (1<->2, 3<->4): swaps the two user pairs.
ChannelParams swap_users(const ChannelParams& ch);
MatrixXcd swap_users(const MatrixXcd& Q);

}  // namespace coopifc
