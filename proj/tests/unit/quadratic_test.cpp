#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "sspec/errors.hpp"
#include "sspec/quadratic.hpp"

using namespace sspec;
using sspec::testing::Gen;

namespace {

constexpr double kOmega = 0.1;
constexpr double kTheta = 1.2;

CliffordOperator jordan() {
  Eigen::Matrix2d a;
  a << 1.0, 1.0, 0.0, 1.0;
  return CliffordOperator::fromRealMatrix(1, a);
}

BisectorReport certified(const CliffordOperator& t) {
  RaySamplingPlan plan;
  plan.phis = {0.65, kTheta};
  return checkBisectorial(t, kOmega, plan);
}

ModuleVector unitVector(Gen& gen, int n, int m) {
  auto v = gen.vector(n, m);
  v *= 1.0 / v.norm();
  return v;
}

}  // namespace

TEST(QuadraticNorm, IdentityAndSelfAdjoint) {
  Gen gen(71);
  const auto e = regularizer(kTheta);
  const auto id = CliffordOperator::identity(1, 2);
  const auto v = unitVector(gen, 1, 2);
  EXPECT_NEAR(quadraticNorm(e, id, v, certified(id)), 1.0, 1e-6);

  const auto sym = gen.symmetric(1, {-2.0, 0.3, 1.7});
  const auto report = certified(sym);
  for (int k = 0; k < 5; ++k) {
    const auto w = gen.vector(1, 3);
    EXPECT_NEAR(quadraticNorm(e, sym, w, report), w.norm(), 1e-6 * w.norm());
  }
}

TEST(QuadraticNorm, ScaleInvariant) {
  Gen gen(72);
  const auto e = regularizer(kTheta);
  const auto t = jordan();
  const auto v = gen.vector(1, 2);
  const double base = quadraticNorm(e, t, v, certified(t));
  for (double c : {0.1, 7.0}) {
    const auto ct = t * c;
    EXPECT_NEAR(quadraticNorm(e, ct, v, certified(ct)), base, 1e-6 * base) << c;
  }
}

TEST(FrameOperator, SymmetricPositiveAndIdentityForNormalOperators) {
  const auto e = regularizer(kTheta);
  for (const auto& t : {CliffordOperator::identity(1, 2), CliffordOperator::diagonal(1, {1.0, -2.0})}) {
    const auto fb = frameBounds(e, t, certified(t));
    EXPECT_LE((fb.theta - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(fb.cLower, 1.0, 1e-5);
    EXPECT_NEAR(fb.dUpper, 1.0, 1e-5);
  }
  const auto j = jordan();
  const auto fb = frameBounds(e, j, certified(j));
  EXPECT_LE((fb.theta - fb.theta.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GE(fb.thetaEigenvalues.minCoeff(), -1e-10);
}

TEST(FrameBounds, JordanBlockIsStrictlyBetween) {
  const auto j = jordan();
  const auto fb = frameBounds(regularizer(kTheta), j, certified(j));
  EXPECT_GT(fb.cLower, 0.0);
  EXPECT_LT(fb.cLower, fb.dUpper);
  EXPECT_TRUE(std::isfinite(fb.dUpper));
  EXPECT_NEAR(fb.cLower * fb.cLower, fb.thetaEigenvalues.minCoeff(), 1e-14);
  EXPECT_NEAR(fb.dUpper * fb.dUpper, fb.thetaEigenvalues.maxCoeff(), 1e-14);
  // fixture from the assembled Theta
  EXPECT_NEAR(fb.cLower, 1.0, 1e-3);
  EXPECT_NEAR(fb.dUpper, 1.1547, 1e-3);
}

TEST(FrameBounds, SandwichForRandomVectors) {
  Gen gen(73);
  const auto g = withSampledCertificates(productFunction(regularizer(kTheta), regularizer(kTheta)));
  const auto j = jordan();
  const auto report = certified(j);
  const auto samples = sampleFrame(g, j, report);
  const auto fb = frameBounds(samples);
  for (int k = 0; k < 100; ++k) {
    const auto v = gen.vector(1, 2);
    const double q = quadraticNorm(samples, v);
    const double tol = (fb.cLowerError() + fb.dUpperError()) * v.norm() + 1e-12;
    EXPECT_GE(q, fb.cLower * v.norm() - tol);
    EXPECT_LE(q, fb.dUpper * v.norm() + tol);
    const Eigen::VectorXd x = v.flatten();
    EXPECT_NEAR(x.dot(fb.theta * x), q * q, 1e-12 * q * q);
  }
}

TEST(FrameBounds, AdjointVariantUsesTheAdjoint) {
  const auto j = jordan();
  const auto js = adjointOperator(j);
  const auto rs = certified(js);
  const auto a = adjointFrameBounds(regularizer(kTheta), j, rs);
  const auto b = frameBounds(regularizer(kTheta), js, rs);
  EXPECT_EQ(a.cLower, b.cLower);
  EXPECT_EQ(a.dUpper, b.dUpper);
}

TEST(SignIdentity, SmallWindowsAreExact) {
  Gen gen(74);
  const auto e = regularizer(kTheta);
  const auto j = jordan();
  const auto report = certified(j);
  const auto v = gen.vector(1, 2);
  for (int n = 1; n <= 5; ++n) {
    const auto s = dyadicSignIdentity(e, j, v, 0.7, n, report);
    EXPECT_NEAR(s.lhs, s.rhs, 1e-10 * (1 + s.lhs)) << "n = " << n;
  }
  EXPECT_THROW(dyadicSignIdentity(e, j, v, 0.7, 0, report), ArgumentError);
  EXPECT_THROW(dyadicSignIdentity(e, j, v, 0.7, kMaxSignWindow + 1, report), ArgumentError);

  const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 2.0);
  const auto single = signIdentity({w});
  EXPECT_DOUBLE_EQ(single.lhs, 12.0);
  EXPECT_DOUBLE_EQ(single.rhs, 12.0);
}

TEST(SignIdentity, ProjectorOrthonormality) {
  for (int size : {1, 2, 6, 10}) {
    EXPECT_TRUE(signProjectorGram(size).isIdentity(0.0)) << size;
  }
}

TEST(DualSelection, Properties) {
  Gen gen(75);
  const std::vector<double> times = {0.1, 1.0, 10.0};
  const auto zeros = dualSelect(times, {ModuleVector(2, 2), ModuleVector(2, 2), ModuleVector(2, 2)});
  for (const auto& p : zeros.psiEps) EXPECT_EQ(p.norm(), 0.0);

  const auto one = gen.vector(2, 2);
  const auto single = dualSelect({1.0}, {one});
  EXPECT_NEAR(innerProduct(single.psi[0], single.psiEps[0]).scalarPart(), one.norm() * one.norm(), 1e-12);

  std::vector<ModuleVector> psi;
  for (int k = 0; k < 20; ++k) psi.push_back(k % 4 == 0 ? ModuleVector(2, 2) : gen.vector(2, 2));
  std::vector<double> ts(20);
  for (int k = 0; k < 20; ++k) ts[k] = k + 1.0;
  const auto d = dualSelect(ts, psi);
  for (int k = 0; k < 20; ++k) {
    EXPECT_EQ(d.psiEps[k].norm(), d.psi[k].norm());
    EXPECT_LE(d.psi[k].norm() * d.psi[k].norm(), innerProduct(d.psi[k], d.psiEps[k]).scalarPart() + 1e-12);
  }
}
