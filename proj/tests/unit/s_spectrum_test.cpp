#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "sspec/errors.hpp"
#include "sspec/s_spectrum.hpp"

using namespace sspec;
using sspec::testing::Gen;
using sspec::testing::opDistance;

namespace {

const Paravector kE1 = Paravector(0.0, {1.0});

CliffordOperator e1Identity() { return CliffordOperator::scalarMultiple(CliffordNum::basis(1, 1), 1); }

bool near(const SpectrumDetection& d, double x, double y, double tol) {
  return std::abs(d.refinedX - x) <= tol && std::abs(d.refinedY - y) <= tol;
}

}  // namespace

TEST(QOperator, ScalarMultipleOfIdentity) {
  Gen gen(41);
  for (int k = 0; k < 50; ++k) {
    const double lambda = gen.uniform(-3.0, 3.0);
    const auto s = gen.paravector(2);
    const auto t = CliffordOperator::identity(2, 2) * lambda;
    const double c = (s.s0() - lambda) * (s.s0() - lambda) + s.absImagSquared();
    EXPECT_LE(opDistance(qOperator(s, t), CliffordOperator::identity(2, 2) * c), 1e-12);
  }
}

TEST(QOperator, RealParameterAndRotation) {
  Gen gen(42);
  const auto t = gen.op(2, 2);
  const double x = 0.7;
  const auto expected = t * t - t * (2.0 * x) + CliffordOperator::identity(2, 2) * (x * x);
  EXPECT_LE(opDistance(qOperator(Paravector::real(2, x), t), expected), 1e-12);

  // Q_s depends on (s0, |s|) only: bitwise equal under rotation of Im s.
  // Axis-aligned units keep |s| bitwise fixed; random ones round it.
  EXPECT_EQ(qOperator(Paravector(0.3, {1.1, 0.0}), t), qOperator(Paravector(0.3, {0.0, -1.1}), t));
  const auto a = Paravector::inSlice(0.3, 1.1, gen.imaginaryUnit(2));
  EXPECT_LE(opDistance(qOperator(a, t), qOperator(Paravector(0.3, {1.1, 0.0}), t)), 1e-14);
}

TEST(SResolvent, ScalarOperator) {
  Gen gen(43);
  for (int k = 0; k < 50; ++k) {
    const double lambda = gen.uniform(-2.0, 2.0);
    const auto s = Paravector::inSlice(gen.uniform(-2.0, 2.0), gen.uniform(0.2, 2.0), gen.imaginaryUnit(2));
    const auto t = CliffordOperator::identity(2, 1) * lambda;
    const double q = (s.s0() - lambda) * (s.s0() - lambda) + s.absImagSquared();
    const auto expected =
        CliffordOperator::scalarMultiple((s.conjugate().toClifford() - CliffordNum::scalar(2, lambda)) * (1.0 / q), 1);
    EXPECT_LE(opDistance(leftSResolvent(s, t), expected), 1e-12);
  }
}

TEST(SResolvent, LeftEqualsRightForRealMatrices) {
  Gen gen(44);
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return gen.uniform(); });
    const auto t = CliffordOperator::fromRealMatrix(2, a);
    const auto s = Paravector::inSlice(gen.uniform(), gen.uniform(0.5, 2.0), gen.imaginaryUnit(2));
    EXPECT_LE(opDistance(leftSResolvent(s, t), rightSResolvent(s, t)), 1e-10);
  }
}

TEST(SResolvent, ScalingIdentity) {
  Gen gen(45);
  for (int k = 0; k < 20; ++k) {
    const auto t = gen.op(1, 2);
    const double scale = gen.uniform(0.3, 3.0) * (gen.integer(0, 1) ? 1.0 : -1.0);
    const auto s = Paravector::inSlice(gen.uniform(-3.0, 3.0), gen.uniform(3.0, 5.0), kE1);
    const auto lhs = leftSResolvent(s * (1.0 / scale), t) * (1.0 / scale);
    const auto rhs = leftSResolvent(s, t * scale);
    EXPECT_LE(opDistance(lhs, rhs), 1e-10 * (1.0 + operatorNorm(rhs)));
  }
}

TEST(SResolvent, ThrowsOnTheSpectrum) {
  EXPECT_THROW(leftSResolvent(Paravector::real(1, 1.0), CliffordOperator::diagonal(1, {1.0, 2.0})),
               NotInvertibleError);
  EXPECT_THROW(leftSResolvent(Paravector(0.0, {1.0}), e1Identity()), NotInvertibleError);
}

TEST(Scan, DiagonalDetectsEigenvalues) {
  const ScanGrid grid{-3.0, 3.0, 0.0, 1.0, 61, 11};
  const auto scan = scanSpectrumSlice(CliffordOperator::diagonal(1, {1.0, -2.0}), grid);
  ASSERT_EQ(scan.detections.size(), 2u);
  for (double v : scan.sigmaMin) EXPECT_GE(v, 0.0);
  std::vector<double> xs;
  for (const auto& d : scan.detections) {
    EXPECT_TRUE(d.real());
    EXPECT_EQ(d.x, grid.x(d.i));
    xs.push_back(d.refinedX);
  }
  std::sort(xs.begin(), xs.end());
  EXPECT_NEAR(xs[0], -2.0, grid.dx());
  EXPECT_NEAR(xs[1], 1.0, grid.dx());
}

TEST(Scan, SphereForImaginaryUnit) {
  const ScanGrid grid{-1.0, 1.0, 0.0, 2.0, 41, 41};
  const auto scan = scanSpectrumSlice(e1Identity(), grid);
  ASSERT_FALSE(scan.detections.empty());
  for (const auto& d : scan.detections) EXPECT_TRUE(near(d, 0.0, 1.0, grid.dx()));
}

TEST(Scan, EmptyRegionAndBadGrids) {
  const auto scan = scanSpectrumSlice(CliffordOperator::diagonal(1, {1.0}), {2.0, 3.0, 0.0, 1.0, 21, 11});
  EXPECT_TRUE(scan.detections.empty());
  EXPECT_THROW(scanSpectrumSlice(CliffordOperator::diagonal(1, {1.0}), {0.0, 1.0, 0.0, 1.0, 0, 3}), ArgumentError);
  EXPECT_THROW(scanSpectrumSlice(CliffordOperator::diagonal(1, {1.0}), {1.0, 0.0, 0.0, 1.0, 3, 3}), ArgumentError);
  EXPECT_THROW(scanSpectrumSlice(CliffordOperator::diagonal(1, {1.0}), {0.0, 1.0, -1.0, 1.0, 3, 3}),
               ArgumentError);
}

TEST(Scan, SymmetricMatricesDetectTheirEigenvalues) {
  Gen gen(46);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> ev = {gen.uniform(-2.0, -0.5), gen.uniform(0.5, 2.0), gen.uniform(2.5, 3.0)};
    const auto t = gen.symmetric(1, ev);
    const ScanGrid grid{-3.5, 3.5, 0.0, 1.0, 71, 11};
    const auto scan = scanSpectrumSlice(t, grid);
    ASSERT_EQ(scan.detections.size(), ev.size()) << "case " << k;
    for (double lambda : ev) {
      const bool found = std::any_of(scan.detections.begin(), scan.detections.end(),
                                     [&](const auto& d) { return near(d, lambda, 0.0, grid.dx()); });
      EXPECT_TRUE(found) << "eigenvalue " << lambda;
    }
  }
}

TEST(Scan, AxialSymmetryIsExact) {
  Gen gen(47);
  const auto t = gen.op(3, 2);
  for (int k = 0; k < 50; ++k) {
    const double x = gen.uniform(-2.0, 2.0), y = gen.uniform(0.0, 2.0);
    const auto a = pseudoResolvent(Paravector::inSlice(x, y, gen.imaginaryUnit(3)), t);
    const auto b = pseudoResolvent(Paravector::inSlice(x, y, gen.imaginaryUnit(3)), t);
    // The slice construction may round |Im s| differently; fix (s0, |s|) exactly.
    const auto c = pseudoResolvent(Paravector(x, {y, 0.0, 0.0}), t);
    const auto d = pseudoResolvent(Paravector(x, {0.0, 0.0, y}), t);
    EXPECT_EQ(c.sigmaMin, d.sigmaMin);
    EXPECT_NEAR(a.sigmaMin, b.sigmaMin, 1e-12 * (1.0 + a.sigmaMin));
  }
}

TEST(Bisectorial, DiagonalPasses) {
  const auto t = CliffordOperator::diagonal(1, {1.0, -2.0});
  const auto report = checkBisectorial(t, 0.1);
  EXPECT_TRUE(report.injective);
  EXPECT_TRUE(report.spectrumInSector);
  EXPECT_TRUE(report.bisectorial());
  ASSERT_FALSE(report.cPhiTable.empty());
  for (std::size_t k = 1; k < report.cPhiTable.size(); ++k) {
    EXPECT_LT(report.cPhiTable[k - 1].phi, report.cPhiTable[k].phi);
    EXPECT_GE(report.cPhiTable[k - 1].cPhi, report.cPhiTable[k].cPhi);
  }
  // Normal operator: |s| ||S_L^{-1}(s,T)|| on the ray at angle phi is
  // maximal at |s| = lambda, where it equals 1/sin(phi).
  for (const auto& e : report.cPhiTable) {
    EXPECT_NEAR(e.cPhi, 1.0 / std::sin(e.phi), 1e-3 / std::sin(e.phi)) << "phi " << e.phi;
  }
}

TEST(Bisectorial, SphereFailsForEveryAngle) {
  for (double omega : {0.1, 0.7, 1.4}) {
    const auto report = checkBisectorial(e1Identity(), omega);
    EXPECT_FALSE(report.bisectorial()) << omega;
    EXPECT_FALSE(report.spectrumInSector) << omega;
  }
}

TEST(Bisectorial, ZeroEigenvalueIsNotInjective) {
  const auto report = checkBisectorial(CliffordOperator::diagonal(1, {0.0, 1.0}), 0.1);
  EXPECT_FALSE(report.injective);
}

TEST(Bisectorial, CPhiAtReadsTheRequestedAngles) {
  const auto t = CliffordOperator::diagonal(2, {1.0, -2.0});
  RaySamplingPlan plan;
  plan.phis = {0.4, 0.8};
  const auto r = checkBisectorial(t, 0.1, plan);
  EXPECT_NEAR(r.cPhiAt(0.4), 1.0 / std::sin(0.4), 1e-3);
  EXPECT_NEAR(r.cPhiAt(0.8), 1.0 / std::sin(0.8), 1e-3);
  EXPECT_THROW(r.cPhiAt(0.05), PreconditionError);
}
