#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "sspec/errors.hpp"
#include "sspec/slice_function.hpp"

using namespace sspec;
using sspec::testing::Gen;
using std::numbers::pi;

namespace {

constexpr double kTheta = 1.2;

Complex eProfile(Complex z) { return z / (1.0 + z * z); }

// A point of the open double sector D_theta, both halves.
Complex samplePoint(Gen& gen, double theta) {
  const double r = std::exp(gen.uniform(-3.0, 3.0));
  const double phi = gen.uniform(-0.95, 0.95) * theta;
  const double side = gen.integer(0, 1) ? 0.0 : pi;
  return std::polar(r, phi + side);
}

std::vector<IntrinsicFunction> builtins() {
  const auto e = regularizer(kTheta);
  return {e,
          eAlphaFamily(0.5, kTheta),
          eAlphaFamily(1.0, kTheta),
          rationalFunction({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, kTheta),
          scaleFunction(e, -2.5),
          fAbFunction(e, 0.1, 10.0),
          productFunction(e, eAlphaFamily(0.5, kTheta)),
          sumFunction(e, constantFunction(2.0, kTheta))};
}

}  // namespace

TEST(Evaluation, RegularizerValues) {
  const auto e = regularizer(kTheta);
  const auto one = evalIntrinsic(e, Paravector::real(2, 1.0));
  EXPECT_DOUBLE_EQ(one.s0(), 0.5);
  EXPECT_EQ(one.absImag(), 0.0);

  EXPECT_THROW(evalIntrinsic(e, Paravector(0.0, {2.0, 0.0})), DomainError);

  const Complex w = eProfile({1.0, 1.0});
  const auto v = evalIntrinsic(e, Paravector(1.0, {0.0, 1.0}));
  EXPECT_NEAR(v.s0(), w.real(), 1e-15);
  EXPECT_NEAR(v.imag()[0], 0.0, 1e-15);
  EXPECT_NEAR(v.imag()[1], w.imag(), 1e-15);
}

TEST(Evaluation, ValueTransportsBetweenSlices) {
  Gen gen(51);
  for (const auto& f : builtins()) {
    for (int k = 0; k < 50; ++k) {
      const Complex z = samplePoint(gen, kTheta);
      const double x = z.real(), y = std::abs(z.imag());
      const Complex w = f(Complex(x, y));
      // exact between units that leave |Im s| bitwise unchanged
      const auto a = evalIntrinsic(f, Paravector(x, {y, 0.0, 0.0}));
      const auto b = evalIntrinsic(f, Paravector(x, {0.0, 0.0, -y}));
      EXPECT_EQ(a.s0(), b.s0()) << f.name();
      EXPECT_EQ(a.imag()[0], -b.imag()[2]) << f.name();
      EXPECT_EQ(a.s0(), w.real()) << f.name();
      EXPECT_NEAR(a.imag()[0], w.imag(), 1e-15 * std::abs(w)) << f.name();
      // a random unit rounds |Im s|, so agree to rounding
      const auto J = gen.imaginaryUnit(3);
      const auto c = evalIntrinsic(f, Paravector::inSlice(x, y, J));
      const double tol = 1e-14 * (1 + std::abs(w));
      EXPECT_NEAR(c.s0(), w.real(), tol) << f.name();
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(c.imag()[i], w.imag() * J.imag()[i], tol);
    }
  }
}

TEST(Evaluation, RealOnTheRealAxisAndSchwarzSymmetric) {
  Gen gen(52);
  for (const auto& f : builtins()) {
    for (int k = 0; k < 50; ++k) {
      const double x = std::exp(gen.uniform(-3.0, 3.0)) * (gen.integer(0, 1) ? 1.0 : -1.0);
      EXPECT_EQ(f(Complex(x, 0.0)).imag(), 0.0) << f.name() << " at " << x;
      const Complex z = samplePoint(gen, kTheta);
      const Complex a = f(std::conj(z)), b = std::conj(f(z));
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-13 * (1 + std::abs(b))) << f.name();
    }
  }
}

TEST(Evaluation, CauchyRiemannResiduals) {
  Gen gen(53);
  for (const auto& f : builtins()) {
    for (int k = 0; k < 100; ++k) {
      const Complex z = samplePoint(gen, 0.9 * kTheta);
      const double h = 1e-5 * std::abs(z);
      const Complex fx = (f(z + Complex(h, 0)) - f(z - Complex(h, 0))) / (2 * h);
      const Complex fy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2 * h);
      // f0_x = f1_y and f0_y = -f1_x, i.e. fy = i fx
      const double scale = std::abs(fx) + std::abs(f(z)) / std::abs(z);
      EXPECT_LE(std::abs(fy - Complex(0, 1) * fx), 1e-6 * scale) << f.name() << " at " << z;
    }
  }
}

TEST(Regularizer, AnalyticCertificateHolds) {
  const auto e = regularizer(kTheta);
  ASSERT_TRUE(e.decay());
  EXPECT_EQ(e.decay()->alpha, 1.0);
  EXPECT_DOUBLE_EQ(e.decay()->cAlpha, 1.0 / std::cos(kTheta));
  for (double psi : sampleRayAngles(kTheta)) {
    for (int k = 0; k < 1000; ++k) {
      const double r = std::pow(10.0, -6.0 + 12.0 * k / 999.0);
      EXPECT_LE(std::abs(e(std::polar(r, psi))), (1.0 / std::cos(kTheta)) * r / (1 + r * r) * (1 + 1e-12));
    }
  }
}

TEST(EAlpha, MatchesRegularizerAtOneAndIsBoundedTimesF) {
  Gen gen(54);
  const auto e = regularizer(kTheta), e1 = eAlphaFamily(1.0, kTheta);
  for (int k = 0; k < 200; ++k) {
    const Complex z = std::polar(std::exp(gen.uniform(-3.0, 3.0)), gen.uniform(-0.99, 0.99) * kTheta);
    EXPECT_NEAR(std::abs(e(z) - e1(z)), 0.0, 1e-14 * (1 + std::abs(e(z))));
  }
  // |e_alpha f| <= ||f||_inf / cos(theta) for bounded f
  const auto f = rationalFunction({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, kTheta);
  const double sup = certifyBounded(f).supNorm;
  for (double alpha : {0.25, 0.5, 1.0}) {
    const auto ea = eAlphaFamily(alpha, kTheta);
    for (int k = 0; k < 200; ++k) {
      const Complex z = samplePoint(gen, kTheta);
      EXPECT_LE(std::abs(ea(z) * f(z)), sup / std::cos(kTheta) * (1 + 1e-12));
    }
  }
  EXPECT_THROW(eAlphaFamily(0.0, kTheta), ArgumentError);
  EXPECT_THROW(eAlphaFamily(1.5, kTheta), ArgumentError);
}

TEST(Scaling, IdentityOddSymmetryAndCertificate) {
  Gen gen(55);
  const auto e = regularizer(kTheta);
  const auto same = scaleFunction(e, 1.0), neg = scaleFunction(e, -1.0);
  for (int k = 0; k < 100; ++k) {
    const Complex z = samplePoint(gen, kTheta);
    EXPECT_EQ(same(z), e(z));
    EXPECT_NEAR(std::abs(neg(z) + e(z)), 0.0, 1e-15 * (1 + std::abs(e(z))));
  }
  EXPECT_THROW(scaleFunction(e, 0.0), ArgumentError);
  for (double t : {0.01, 0.3, 7.0, -40.0}) {
    const auto f = scaleFunction(e, t);
    ASSERT_TRUE(f.decay());
    const auto sampled = certifyDecay(f, f.decay()->alpha);
    ASSERT_TRUE(sampled);
    EXPECT_LE(sampled->cAlpha, f.decay()->cAlpha * (1 + 1e-12)) << "t = " << t;
  }
}

TEST(F0Infty, AnalyticValues) {
  const auto e = regularizer(kTheta);
  EXPECT_NEAR(f0Infty(e), pi, 1e-8);
  // (e e^2)(t) = t^3/(1+t^2)^3, so the integral of t^2/(1+t^2)^3 is pi/8
  const auto ee2 = productFunction(e, productFunction(e, e));
  EXPECT_NEAR(f0Infty(withSampledCertificates(ee2)), pi / 8, 1e-8);
  const auto along = f0InftyAlong(e, pi / 8);
  EXPECT_NEAR(along.real(), pi, 1e-6);
  EXPECT_NEAR(along.imag(), 0.0, 1e-6);
}

TEST(F0Infty, MatchesIndependentQuadrature) {
  // Composite Simpson in u = log t on the scalar integrand t/(1+t^2), both signs.
  const auto g = rationalFunction({0.0, 1.0}, {1.0, 0.0, 2.0, 0.0, 1.0}, kTheta);
  const auto f = withSampledCertificates(g);
  const int n = 200000;
  const double lo = -40.0, hi = 40.0, h = (hi - lo) / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = std::exp(lo + k * h);
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * (g(Complex(t, 0)).real() - g(Complex(-t, 0)).real());
  }
  // integral of t/(1+t^2)^2 dt/t over R is pi/2
  EXPECT_NEAR(sum * h / 3.0, pi / 2, 1e-8);
  EXPECT_NEAR(f0Infty(f), pi / 2, 1e-8);
}

TEST(FAb, DegenerateIntervalAndOrdering) {
  const auto e = regularizer(kTheta);
  const auto zero = fAbFunction(e, 2.0, 2.0);
  EXPECT_EQ(zero(Complex(1.0, 0.3)), Complex(0.0, 0.0));
  EXPECT_THROW(fAbFunction(e, 3.0, 2.0), ArgumentError);
  EXPECT_THROW(fAbFunction(e, 0.0, 2.0), ArgumentError);
}

TEST(FAb, ConvergesToF0InftyWithinTheArctanBound) {
  const auto e = regularizer(kTheta);
  for (int k = 1; k <= 4; ++k) {
    const double a = std::pow(10.0, -k), b = std::pow(10.0, k);
    const double value = fAbFunction(e, a, b)(Complex(1.0, 0.0)).real();
    const double alpha = 1.0, c = 1.0 / std::cos(kTheta);
    // (2 C/alpha) (arctan(a^alpha) + pi/2 - arctan(b^alpha)) at |s| = 1
    const double bound = 2 * c / alpha * (std::atan(std::pow(a, alpha)) + pi / 2 - std::atan(std::pow(b, alpha)));
    EXPECT_LE(std::abs(value - pi), bound) << "k = " << k;
    // exact for e: 2 (arctan a + arctan(1/b))
    EXPECT_NEAR(pi - value, 2 * (std::atan(a) + std::atan(1 / b)), 1e-10);
  }
}

TEST(FAb, SupNormBound) {
  const auto e = regularizer(kTheta);
  const auto f = fAbFunction(e, 0.01, 100.0);
  const double bound = e.decay()->cAlpha * pi / e.decay()->alpha;
  EXPECT_LE(certifyBounded(f).supNorm, bound);
  ASSERT_TRUE(f.decay());
  const auto sampled = certifyDecay(f, f.decay()->alpha);
  ASSERT_TRUE(sampled);
  EXPECT_LE(sampled->cAlpha, f.decay()->cAlpha * (1 + 1e-9));
}

TEST(Certificates, Examples) {
  const auto e = regularizer(kTheta);
  const auto c = certifyDecay(e, 1.0);
  ASSERT_TRUE(c);
  EXPECT_LE(c->cAlpha, 1.0 / std::cos(kTheta) + 1e-9);
  EXPECT_GT(c->samples, 0);

  const auto one = constantFunction(1.0, kTheta);
  for (double alpha : {0.1, 0.5, 1.0, 2.0}) EXPECT_FALSE(certifyDecay(one, alpha)) << alpha;

  EXPECT_TRUE(certifyDecay(productFunction(e, e), 2.0));
}

TEST(Certificates, ProductsAddExponents) {
  const auto e = regularizer(kTheta);
  const auto ea = eAlphaFamily(0.5, kTheta);
  const auto p = productFunction(e, ea);
  ASSERT_TRUE(p.decay());
  EXPECT_DOUBLE_EQ(p.decay()->alpha, 1.5);
  EXPECT_DOUBLE_EQ(p.decay()->cAlpha, e.decay()->cAlpha * ea.decay()->cAlpha);
  const auto sampled = certifyDecay(p, 1.5);
  ASSERT_TRUE(sampled);
  EXPECT_LE(sampled->cAlpha, p.decay()->cAlpha * (1 + 1e-12));
}

TEST(Certificates, SampledBoundsHoldOnTheirSamples) {
  Gen gen(56);
  for (const auto& f : builtins()) {
    const auto b = certifyBounded(f);
    for (int k = 0; k < 200; ++k) {
      const Complex z = std::polar(std::exp(gen.uniform(-5.0, 5.0)), gen.uniform(-1.0, 1.0) * kTheta);
      // off-sample points may exceed by the sampling gap; keep a small slack
      EXPECT_LE(std::abs(f(z)), b.supNorm * 1.01 + 1e-12) << f.name();
    }
  }
}

TEST(Rational, RejectsPolesInTheSector) {
  EXPECT_THROW(rationalFunction({1.0}, {-1.0, 1.0}, kTheta), DomainError);
  EXPECT_THROW(rationalFunction({1.0}, {1.0}, 0.0), ArgumentError);
  const auto f = rationalFunction({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, kTheta);
  ASSERT_TRUE(f.toRational());
  EXPECT_EQ(f.toRational()->num, (std::vector<double>{0.0, 0.0, 1.0}));
}
