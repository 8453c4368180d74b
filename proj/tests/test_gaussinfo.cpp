#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/gaussinfo.hpp"
#include "core/model.hpp"

using namespace coopifc;

namespace {

const double kLog2PiE = std::log2(M_PI * M_E);

ChannelParams scalar_link(double gain) {
  ChannelParams ch;
  ch.K = 1;
  ch.H = MatrixXcd::Zero(2, 2);
  ch.H(1, 0) = gain;
  ch.P = VectorXd::Ones(2);
  ch.SigmaZ = MatrixXcd::Identity(2, 2);
  ch.C = VectorXd::Zero(2);
  return ch;
}

MatrixXcd diag4(double a, double b, double c, double d) {
  Eigen::Vector4d v(a, b, c, d);
  return v.asDiagonal().toDenseMatrix().cast<std::complex<double>>();
}

JointCov random_joint(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss;
  MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  MatrixXd M = A * A.transpose() + 1e-3 * MatrixXd::Identity(n, n);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("V" + std::to_string(i + 1));
  return JointCov::make(M.cast<std::complex<double>>(), labels);
}

}  // namespace

TEST_CASE("joint covariance has the block form") {
  ChannelParams ch = scalar_link(1.0);
  MatrixXcd Q = MatrixXcd::Zero(2, 2);
  Q(0, 0) = 1.0;
  JointCov jc = joint_covariance(ch, Q);
  CHECK(jc.M(jc.at("X1"), jc.at("Y2")).real() == doctest::Approx(1.0));
  CHECK(jc.M(jc.at("Y2"), jc.at("Y2")).real() == doctest::Approx(2.0));
  CHECK(jc.M(jc.at("Y1"), jc.at("Y1")).real() == doctest::Approx(1.0));

  JointCov silent = joint_covariance(ch, MatrixXcd::Zero(2, 2));
  CHECK(silent.M(silent.at("Y2"), silent.at("Y2")).real() ==
        doctest::Approx(1.0));
}

TEST_CASE("symmetric channel output variance sums the squared gains") {
  SymmetricParams s;
  s.snr = 100.0;
  s.alpha = 0.5;
  ModedParams mp = apply_mode(CoopMode::NoCoop, s);
  ChannelParams ch = build_symmetric(mp.sym, mp.mask);
  JointCov jc = joint_covariance(ch, diag4(1, 1, 0, 0));
  CHECK(jc.M(jc.at("Y3"), jc.at("Y3")).real() == doctest::Approx(111.0));
}

TEST_CASE("joint covariance rejects bad input covariance") {
  ChannelParams ch = scalar_link(1.0);
  CHECK_THROWS_AS(joint_covariance(ch, MatrixXcd::Zero(3, 3)),
                  std::invalid_argument);
  MatrixXcd notPsd = MatrixXcd::Identity(2, 2);
  notPsd(0, 0) = -1.0;
  CHECK_THROWS_AS(joint_covariance(ch, notPsd), std::invalid_argument);
}

TEST_CASE("scalar entropies match the closed forms") {
  ChannelParams ch = scalar_link(1.0);
  MatrixXcd Q = MatrixXcd::Zero(2, 2);
  Q(0, 0) = 1.0;
  JointCov jc = joint_covariance(ch, Q);
  // Var(Y2) = 2.
  CHECK(cond_entropy(jc, {"Y2"}, {}) ==
        doctest::Approx(kLog2PiE + 1.0).epsilon(1e-12));
  // Given X1 only the unit noise remains.
  CHECK(cond_entropy(jc, {"Y2"}, {"X1"}) ==
        doctest::Approx(kLog2PiE).epsilon(1e-12));
  // Y1 is independent noise: conditioning on it changes nothing.
  CHECK(cond_entropy(jc, {"Y2"}, {"Y1"}) ==
        doctest::Approx(cond_entropy(jc, {"Y2"}, {})).epsilon(1e-12));
  CHECK_THROWS_AS(cond_entropy(jc, {}, {"X1"}), std::invalid_argument);
}

TEST_CASE("scalar mutual information is log2(1+snr)") {
  ChannelParams ch = scalar_link(std::sqrt(3.0));
  MatrixXcd Q = MatrixXcd::Zero(2, 2);
  Q(0, 0) = 1.0;
  JointCov jc = joint_covariance(ch, Q);
  CHECK(mutual_info(jc, {"X1"}, {"Y2"}, {}) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("two-sender adder channel gives log2(3)") {
  ChannelParams ch;
  ch.K = 2;
  ch.H = MatrixXcd::Zero(4, 4);
  ch.H(2, 0) = 1.0;
  ch.H(2, 1) = 1.0;
  ch.P = VectorXd::Ones(4);
  ch.SigmaZ = MatrixXcd::Identity(4, 4);
  ch.C = VectorXd::Zero(4);
  JointCov jc = joint_covariance(ch, diag4(1, 1, 0, 0));
  CHECK(mutual_info(jc, {"X1", "X2"}, {"Y3"}, {}) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  // Unconnected input carries nothing.
  CHECK(mutual_info(jc, {"X1"}, {"Y4"}, {}) == 0.0);
}

TEST_CASE("degenerate conditional covariance is an error") {
  MatrixXcd M(2, 2);
  M << 1.0, 1.0, 1.0, 1.0;  // V2 = V1 almost surely
  JointCov jc = JointCov::make(M, {"V1", "V2"});
  CHECK_THROWS_AS(cond_entropy(jc, {"V2"}, {"V1"}), DegenerateError);
}

TEST_CASE("randomized information identities") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    JointCov jc = random_joint(rng, 8);
    VarSet A{"V1", "V2"}, B{"V3", "V4"}, C{"V5", "V6"}, D{"V7", "V8"};

    const double iabc = mutual_info(jc, A, set_union(B, C), D);
    const double chain = mutual_info(jc, A, B, D) +
                         mutual_info(jc, A, C, set_union(B, D));
    CHECK(std::abs(iabc - chain) <= 1e-8);

    CHECK(mutual_info(jc, A, B, C) >= 0.0);
    CHECK(std::abs(mutual_info(jc, A, B, C) - mutual_info(jc, B, A, C)) <=
          1e-10);

    // Conditioning reduces entropy.
    CHECK(cond_entropy(jc, A, B) >= cond_entropy(jc, A, set_union(B, C)) - 1e-9);
    CHECK(cond_entropy(jc, A, {}) >= cond_entropy(jc, A, B) - 1e-9);
  }
}

TEST_CASE("indexed fast path agrees with the labeled path") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    JointCov jc = random_joint(rng, 6);
    MatrixXd Mr = jc.M.real();
    const double labeled =
        cond_entropy(jc, {"V1", "V2"}, {"V4", "V5"}) - 2.0 * kLog2PiE;
    const double indexed = detail::cond_logdet(Mr, {0, 1}, {3, 4});
    CHECK(labeled == doctest::Approx(indexed).epsilon(1e-10));
  }
}

TEST_CASE("singular conditioning blocks are handled by pseudo-inversion") {
  // Conditioning on a zero-variance coordinate must behave as if absent.
  MatrixXcd M = MatrixXcd::Zero(3, 3);
  M(0, 0) = 2.0;
  M(1, 1) = 1.0;
  M(0, 1) = M(1, 0) = 0.5;
  JointCov jc = JointCov::make(M, {"V1", "V2", "V3"});
  CHECK(cond_entropy(jc, {"V1"}, {"V2", "V3"}) ==
        doctest::Approx(cond_entropy(jc, {"V1"}, {"V2"})).epsilon(1e-12));
}
