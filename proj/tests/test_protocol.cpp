#include <gtest/gtest.h>

#include <random>

#include "qisc/errors.hpp"
#include "qisc/protocol.hpp"
#include "qisc/symplectic.hpp"
#include "test_util.hpp"

namespace qisc {
namespace {

using testing::Mat4d;
using testing::rel_err;

TEST(Params, Validation) {
  EXPECT_NO_THROW(validate(ProtocolParams{}));
  EXPECT_NO_THROW(validate(ProtocolParams{1.0, 0.0, 0.0, 1}));
  EXPECT_THROW(validate(ProtocolParams{0.0, 0.1, 1.0, 1}), InvalidParams);
  EXPECT_THROW(validate(ProtocolParams{1.5, 0.1, 1.0, 1}), InvalidParams);
  EXPECT_THROW(validate(ProtocolParams{0.5, -0.1, 1.0, 1}), InvalidParams);
  EXPECT_THROW(validate(ProtocolParams{0.5, 0.1, -1.0, 1}), InvalidParams);
  EXPECT_THROW(validate(ProtocolParams{0.5, 0.1, 1.0, 0}), InvalidParams);
  EXPECT_THROW(validate(ProtocolParams{std::nan(""), 0.1, 1.0, 1}), InvalidParams);
  EXPECT_THROW(bpsk_sign(2), InvalidParams);
}

TEST(Symbols, ReferencePoint) {
  const auto d = derive_symbols<double>(ProtocolParams{0.1, 0.004, 100.0, 1});
  EXPECT_DOUBLE_EQ(d.S, 1.008);
  EXPECT_DOUBLE_EQ(d.A, 21.00008);
  EXPECT_DOUBLE_EQ(d.D, 1.0072);
  EXPECT_DOUBLE_EQ(d.E, 181.00072);
  EXPECT_LT(rel_err(d.Cq, 0.126743836142038876), 1e-14);
  EXPECT_LT(rel_err(d.Ca, 0.0126743836142038876), 1e-14);
  EXPECT_LT(rel_err(d.Ce, 0.00227683991532123312), 1e-14);
}

TEST(Symbols, CorrelationExceedsClassicalLimit) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto p = testing::random_params(rng);
    const auto d = derive_symbols<double>(p);
    EXPECT_GT(d.Cq, 2.0 * p.n_s);
  }
}

TEST(Source, TmsvIsPure) {
  for (double ns : {0.0, 1e-3, 0.7, 25.0}) {
    const Mat4d v = tmsv_cov<double>(ns);
    // det V = (S^2 - Cq^2)^2 / 4^4 = 1 / 256
    EXPECT_NEAR(v.determinant(), 1.0 / 256.0, 1e-12 * (1 + ns * ns * ns * ns));
    EXPECT_TRUE(is_physical(v));
  }
  EXPECT_THROW(tmsv_cov<double>(-1.0), InvalidParams);
}

TEST(Conditional, SignPatterns) {
  const ProtocolParams p{0.3, 0.2, 2.0, 1};
  const auto d = derive_symbols<double>(p);
  for (int k : {0, 1}) {
    const double sign = k == 0 ? 1.0 : -1.0;
    const Mat4d a = 4.0 * alice_conditional_cov<double>(p, k);
    EXPECT_DOUBLE_EQ(a(0, 2), sign * d.Ca);
    EXPECT_DOUBLE_EQ(a(1, 3), -sign * d.Ca);
    EXPECT_DOUBLE_EQ(a(0, 0), d.A);
    EXPECT_DOUBLE_EQ(a(2, 2), d.S);
    EXPECT_EQ(a(0, 1), 0.0);
    EXPECT_EQ(a(0, 3), 0.0);
    const Mat4d e = 4.0 * eve_conditional_cov<double>(p, k);
    EXPECT_DOUBLE_EQ(e(0, 2), sign * d.Ce);
    EXPECT_DOUBLE_EQ(e(1, 3), sign * d.Ce);
    EXPECT_DOUBLE_EQ(e(0, 0), d.D);
    EXPECT_DOUBLE_EQ(e(2, 2), d.E);
  }
}

TEST(Conditional, AllPhysicalOnRandomParams) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto p = testing::random_params(rng);
    for (int k : {0, 1}) {
      ASSERT_TRUE(is_physical(alice_conditional_cov<double>(p, k)));
      ASSERT_TRUE(is_physical(eve_conditional_cov<double>(p, k)));
    }
  }
}

TEST(Conditional, LosslessChannelLeavesEveVacuum) {
  const ProtocolParams p{1.0, 0.5, 3.0, 1};
  for (int k : {0, 1}) {
    EXPECT_TRUE(eve_conditional_cov<double>(p, k).isApprox(Mat4d::Identity() / 4.0));
  }
  const ProtocolParams quiet{1.0, 0.5, 0.0, 1};
  // Bob's phase flip on the signal turns Alice's pair into the flipped TMSV.
  EXPECT_TRUE(alice_conditional_cov<double>(quiet, 0).isApprox(tmsv_cov<double>(0.5)));
}

TEST(Conditional, DarkSourceCarriesNoBit) {
  const ProtocolParams p{0.4, 0.0, 3.0, 1};
  EXPECT_EQ(alice_conditional_cov<double>(p, 0), alice_conditional_cov<double>(p, 1));
  EXPECT_EQ(eve_conditional_cov<double>(p, 0), eve_conditional_cov<double>(p, 1));
}

TEST(Conditional, PhotonNumberConservation) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_params(rng);
    const auto d = derive_symbols<double>(p);
    const double return_photons = (d.A - 1.0) / 2.0;
    const double tap_out = (d.D - 1.0) / 2.0;
    const double tap_back = (d.E - 1.0) / 2.0;
    const double to_bob = p.kappa * p.n_s;
    EXPECT_NEAR(tap_out + to_bob, p.n_s, 1e-12 * (1 + p.n_s));
    EXPECT_NEAR(return_photons + tap_back, to_bob + p.n_b, 1e-12 * (1 + p.n_b + p.n_s));
  }
}

TEST(Homodyne, MarginalOfFullCovariance) {
  const ProtocolParams p{0.2, 0.05, 7.0, 1};
  for (int k : {0, 1}) {
    const Mat4d full = alice_conditional_cov<double>(p, k);
    const Mat2<double> h = homodyne_cov<double>(p, k);
    EXPECT_EQ(h(0, 0), full(0, 0));
    EXPECT_EQ(h(0, 1), full(0, 2));
    EXPECT_EQ(h(1, 0), full(2, 0));
    EXPECT_EQ(h(1, 1), full(2, 2));
  }
}

// OPA output sqrt(G) a_I + sqrt(G - 1) a_R^dagger: quadrature weights on
// (q_R, p_R, q_I, p_I).
double opa_photons_from_cov(const Mat4d& v, double gain) {
  const Eigen::Vector4d wq(std::sqrt(gain - 1.0), 0.0, std::sqrt(gain), 0.0);
  const Eigen::Vector4d wp(0.0, -std::sqrt(gain - 1.0), 0.0, std::sqrt(gain));
  return wq.dot(v * wq) + wp.dot(v * wp) - 0.5;
}

TEST(Opa, MeanPhotonsMatchQuadraticForm) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    auto p = testing::random_params(rng);
    if (p.n_b == 0.0) p.n_b = 1.0;
    const OpaSpec spec = opa_spec(p);
    EXPECT_NEAR(spec.gain, 1.0 + p.n_s / std::sqrt(p.kappa * p.n_b), 1e-14 * spec.gain);
    const double n0 = opa_photons_from_cov(alice_conditional_cov<double>(p, 0), spec.gain);
    const double n1 = opa_photons_from_cov(alice_conditional_cov<double>(p, 1), spec.gain);
    const double scale = 1.0 + spec.gain * (p.n_s + p.n_b);
    EXPECT_NEAR(spec.n0, n0, 1e-12 * scale) << i;
    EXPECT_NEAR(spec.n1, n1, 1e-12 * scale) << i;
    EXPECT_GT(spec.n0, spec.n1);
  }
}

TEST(Opa, OutputIsPhaseInsensitive) {
  const ProtocolParams p{0.1, 0.004, 100.0, 1};
  const double g = opa_spec(p).gain;
  const Eigen::Vector4d wq(std::sqrt(g - 1.0), 0.0, std::sqrt(g), 0.0);
  const Eigen::Vector4d wp(0.0, -std::sqrt(g - 1.0), 0.0, std::sqrt(g));
  for (int k : {0, 1}) {
    const Mat4d v = alice_conditional_cov<double>(p, k);
    EXPECT_NEAR(wq.dot(v * wp), 0.0, 1e-15);
    EXPECT_NEAR(wq.dot(v * wq), wp.dot(v * wp), 1e-14);
  }
}

TEST(Opa, ReferencePoint) {
  const OpaSpec spec = opa_spec(ProtocolParams{0.1, 0.004, 100.0, 1});
  EXPECT_LT(rel_err(spec.gain - 1.0, 0.00126491106406735173), 1e-12);
  EXPECT_LT(rel_err(spec.n0, 0.0183701888568508660), 1e-12);
  EXPECT_LT(rel_err(spec.n1, 0.0174680750340285363), 1e-12);
}

TEST(Opa, UndefinedWithoutNoise) {
  EXPECT_THROW(opa_spec(ProtocolParams{0.1, 0.004, 0.0, 1}), InvalidParams);
}

}  // namespace
}  // namespace qisc
