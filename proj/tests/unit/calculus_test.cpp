#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "sspec/calculus.hpp"
#include "sspec/errors.hpp"

using namespace sspec;
using sspec::testing::Gen;
using sspec::testing::opDistance;
using std::numbers::pi;

namespace {

constexpr double kOmega = 0.1;
constexpr double kTheta = 1.2;

CliffordOperator jordan(int n = 1) {
  Eigen::Matrix2d a;
  a << 1.0, 1.0, 0.0, 1.0;
  return CliffordOperator::fromRealMatrix(n, a);
}

BisectorReport certified(const CliffordOperator& t, std::vector<double> phis = {0.65, kTheta}) {
  RaySamplingPlan plan;
  plan.phis = std::move(phis);
  auto r = checkBisectorial(t, kOmega, plan);
  EXPECT_TRUE(r.bisectorial());
  return r;
}

IntrinsicFunction e() { return regularizer(kTheta); }
IntrinsicFunction s2() {
  return withSampledCertificates(rationalFunction({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, kTheta, "s^2/(1+s^2)"));
}
IntrinsicFunction e2() { return withSampledCertificates(productFunction(e(), e())); }

double combined(const CalculusResult& a, const CalculusResult& b) { return a.errorBound() + b.errorBound(); }

}  // namespace

TEST(OmegaCalculus, RegularizerOnDiagonal) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto r = omegaCalculus(e(), t, certified(t));
  EXPECT_LE(opDistance(r.op, CliffordOperator::diagonal(1, {0.5, 0.4})), 1e-6);
  EXPECT_GE(r.truncationError, 0.0);
  EXPECT_GE(r.discretizationError, 0.0);
}

TEST(OmegaCalculus, AgreesWithRationalOracle) {
  Gen gen(61);
  const std::vector<CliffordOperator> ops = {CliffordOperator::diagonal(1, {1.0, 2.0}), jordan(),
                                             CliffordOperator::diagonal(1, {1.0, -2.0}),
                                             gen.symmetric(1, {-1.5, 0.4, 3.0})};
  const std::vector<IntrinsicFunction> fs = {
      e(), e2(), withSampledCertificates(rationalFunction({0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0}, kTheta))};
  for (const auto& t : ops) {
    const auto report = certified(t);
    for (const auto& f : fs) {
      const auto q = omegaCalculus(f, t, report);
      const double gap = opDistance(q.op, rationalCalculus(f, t));
      EXPECT_LE(gap, std::max(1e-6, q.errorBound())) << f.name();
    }
  }
}

TEST(HInfCalculus, BoundedRationalAndConstant) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto report = certified(t);
  const auto r = hInfCalculus(s2(), t, report);
  EXPECT_LE(opDistance(r.op, CliffordOperator::diagonal(1, {0.5, 0.8})), 1e-6);
  const auto one = hInfCalculus(withSampledCertificates(constantFunction(1.0, kTheta)), jordan(), certified(jordan()));
  EXPECT_LE(opDistance(one.op, CliffordOperator::identity(1, 2)), 1e-6);
}

TEST(HInfCalculus, MatchesOmegaCalculusOnDecayingFunctions) {
  for (const auto& t : {CliffordOperator::diagonal(1, {1.0, 2.0}), jordan()}) {
    const auto report = certified(t);
    for (const auto& f : {e(), e2()}) {
      const auto a = omegaCalculus(f, t, report), b = hInfCalculus(f, t, report);
      EXPECT_LE(opDistance(a.op, b.op), combined(a, b)) << f.name();
    }
  }
}

TEST(Calculus, Preconditions) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto sphere = CliffordOperator::scalarMultiple(CliffordNum::basis(1, 1), 1);
  EXPECT_THROW(omegaCalculus(e(), sphere, checkBisectorial(sphere, kOmega)), PreconditionError);
  // bounded but not decaying
  EXPECT_THROW(omegaCalculus(s2(), t, certified(t)), PreconditionError);
  // contour angle outside (omega, theta)
  ContourConfig cfg;
  cfg.phi = 1.3;
  EXPECT_THROW(omegaCalculus(e(), t, certified(t), cfg), PreconditionError);
}

TEST(RationalCalculus, Examples) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  EXPECT_LE(opDistance(rationalCalculus(e(), t), CliffordOperator::diagonal(1, {0.5, 0.4})), 1e-15);

  // (1+a^2T^2)^{-1} - (1+b^2T^2)^{-1} = (b^2-a^2) T^2 (1+a^2T^2)^{-1} (1+b^2T^2)^{-1}
  Gen gen(62);
  const auto m = gen.op(1, 3);
  const double a = 0.3, b = 2.0;
  const auto id = CliffordOperator::identity(1, 3);
  const auto ia = inverseOperator(id + m * m * (a * a));
  const auto ib = inverseOperator(id + m * m * (b * b));
  EXPECT_LE(opDistance(ia - ib, m * m * ia * ib * (b * b - a * a)), 1e-10 * (1 + operatorNorm(ia - ib)));

  // 1/(s-1) cannot be built on a sector around the spectrum; the raw form still
  // reaches the guard when q(T) is singular
  EXPECT_THROW(rationalFunction({1.0}, {-1.0, 1.0}, 0.05), DomainError);
  EXPECT_THROW(rationalCalculusReal({{1.0}, {-1.0, 1.0}}, realRepresentation(t).matrix), NotInvertibleError);
}

TEST(OmegaCalculus, IndependentOfSliceAndAngle) {
  const auto t = CliffordOperator::diagonal(2, {1.0, 2.0}) + CliffordOperator::fromRealMatrix(2, Eigen::Matrix2d{{0.0, 0.5}, {0.0, 0.0}});
  const auto report = certified(t, {0.4, 0.65, 0.9, kTheta});
  for (const auto& f : {e(), e2()}) {
    ContourConfig c1;
    ContourConfig c2;
    c2.J = Paravector(0.0, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
    const auto a = omegaCalculus(f, t, report, c1), b = omegaCalculus(f, t, report, c2);
    EXPECT_LE(opDistance(a.op, b.op), combined(a, b)) << f.name();

    ContourConfig p1, p2;
    p1.phi = 0.4;
    p2.phi = 0.9;
    const auto x = omegaCalculus(f, t, report, p1), y = omegaCalculus(f, t, report, p2);
    EXPECT_LE(opDistance(x.op, y.op), combined(x, y)) << f.name();
  }
}

TEST(OmegaCalculus, DoublingNodesStaysWithinTheDiscretizationEstimate) {
  const auto t = jordan();
  const auto report = certified(t);
  ContourConfig coarse, fine;
  coarse.nodes = 400;
  fine.nodes = 800;
  const auto a = omegaCalculus(e(), t, report, coarse), b = omegaCalculus(e(), t, report, fine);
  EXPECT_LE(opDistance(a.op, b.op), a.discretizationError + b.discretizationError + 1e-14);
}

TEST(OmegaCalculus, ProductLinearityAndCommutation) {
  Gen gen(63);
  const auto t = jordan();
  const auto report = certified(t);
  const std::vector<IntrinsicFunction> fs = {e(), e2(), withSampledCertificates(eAlphaFamily(0.5, kTheta)),
                                             withSampledCertificates(scaleFunction(e(), 2.0))};
  for (const auto& f : fs) {
    for (const auto& g : fs) {
      const auto fg = omegaCalculus(withSampledCertificates(productFunction(f, g)), t, report);
      const auto a = omegaCalculus(f, t, report), b = omegaCalculus(g, t, report);
      const double tol = fg.errorBound() + a.errorBound() * operatorNorm(b.op) +
                         b.errorBound() * operatorNorm(a.op) + a.errorBound() * b.errorBound();
      EXPECT_LE(opDistance(fg.op, a.op * b.op), tol) << f.name() << " * " << g.name();
      const auto sum = omegaCalculus(withSampledCertificates(sumFunction(f, g)), t, report);
      EXPECT_LE(opDistance(sum.op, a.op + b.op), sum.errorBound() + a.errorBound() + b.errorBound());
    }
  }
  const auto ee = omegaCalculus(e(), t, report);
  const auto ef = omegaCalculus(withSampledCertificates(productFunction(e(), s2())), t, report);
  EXPECT_LE(opDistance(ee.op * ef.op, ef.op * ee.op), 2 * (ee.errorBound() + ef.errorBound()));
}

TEST(OmegaCalculus, NormBound) {
  const auto t = jordan();
  const auto report = certified(t);
  const double phi = contourAngle({}, report, kTheta);
  for (const auto& f : {e(), e2()}) {
    const auto r = omegaCalculus(f, t, report);
    EXPECT_LE(operatorNorm(r.op), omegaNormBound(f, report, phi) + r.errorBound()) << f.name();
  }
}

TEST(ScaledCalculus, Examples) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto report = certified(t);
  const auto one = scaledCalculus(e(), 1.0, t, report);
  EXPECT_EQ(one.real, omegaCalculus(e(), t, report).real);
  const auto two = scaledCalculus(e(), 2.0, t, report);
  EXPECT_LE(opDistance(two.op, CliffordOperator::diagonal(1, {0.4, 4.0 / 17.0})), 1e-6);
  EXPECT_THROW(scaledCalculus(e(), 0.0, t, report), ArgumentError);
}

TEST(ScaledCalculus, ConsistentWithScaledOperator) {
  Gen gen(64);
  const auto t = jordan();
  const auto report = certified(t);
  for (int k = 0; k < 5; ++k) {
    const double s = std::exp(gen.uniform(-2.0, 2.0)) * (gen.integer(0, 1) ? 1.0 : -1.0);
    const auto a = scaledCalculus(e(), s, t, report);
    EXPECT_LE(opDistance(a.op, rationalCalculus(e(), t * s)), std::max(1e-6, a.errorBound())) << s;
  }
}

TEST(FAbOperator, TwoPathsAgree) {
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto report = certified(t);
  const auto direct = fAbOperator(e(), 0.1, 10.0, t, report);
  const auto viaFunction = omegaCalculus(fAbFunction(e(), 0.1, 10.0), t, report);
  EXPECT_LE(opDistance(direct.op, viaFunction.op), std::max(1e-5, combined(direct, viaFunction)));
  const auto zero = fAbOperator(e(), 3.0, 3.0, t, report);
  EXPECT_EQ(operatorNorm(zero.op), 0.0);
}

TEST(FAbOperator, ApproachesF0InftyTimesSign) {
  // On a positive spectrum the limit is pi Id; the gap is
  // 2 (arctan(a lambda) + arctan(1/(b lambda))), largest at lambda = 2.
  const auto t = CliffordOperator::diagonal(1, {1.0, 2.0});
  const auto report = certified(t);
  double previous = INFINITY;
  for (int k = 1; k <= 3; ++k) {
    const double a = std::pow(10.0, -k), b = 1 / a;
    const auto r = fAbOperator(e(), a, b, t, report);
    const double gap = opDistance(r.op, CliffordOperator::identity(1, 2) * pi);
    const double exact = std::max(2 * (std::atan(a) + std::atan(1 / b)), 2 * (std::atan(2 * a) + std::atan(1 / (2 * b))));
    EXPECT_NEAR(gap, exact, 1e-6 + r.errorBound()) << "k = " << k;
    EXPECT_LT(gap, previous);
    previous = gap;
  }
}

TEST(AdjointCalculus, Examples) {
  Gen gen(65);
  const auto sym = gen.symmetric(1, {-1.0, 0.5, 2.0});
  const auto rs = certified(sym);
  EXPECT_LE(adjointCalculusCheck(e(), sym, rs, rs).gap, 1e-8);

  const auto j = jordan();
  const auto rj = certified(j);
  const auto rjs = certified(adjointOperator(j));
  for (const auto& f : {e(), e2(), s2()}) {
    const auto g = adjointCalculusCheck(f, j, rj, rjs);
    EXPECT_LE(g.gap, g.tolerance + 1e-12) << f.name();
  }
  const auto one = withSampledCertificates(constantFunction(1.0, kTheta));
  EXPECT_LE(adjointCalculusCheck(one, j, rj, rjs).gap, 1e-8);
}

TEST(Calculus, DeterministicAcrossRuns) {
  const auto t = jordan();
  const auto report = certified(t);
  const auto a = omegaCalculus(e2(), t, report), b = omegaCalculus(e2(), t, report);
  EXPECT_EQ(a.real, b.real);
  EXPECT_EQ(a.truncationError, b.truncationError);
  EXPECT_EQ(a.discretizationError, b.discretizationError);
}
