#include "sspec/clifford.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {

namespace {

void checkN(int n) {
  if (n < 1 || n > kMaxGenerators) {
    throw DimensionError("Clifford dimension n=" + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxGenerators) + "]");
  }
}

void checkSameN(int a, int b) {
  if (a != b) {
    throw DimensionError("Clifford dimensions differ: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

int grade(BasisMask a) noexcept { return std::popcount(a); }

int basisProductSign(BasisMask a, BasisMask b) noexcept {
  int swaps = 0;
  for (BasisMask rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    // generators of a with index above j must pass e_j
    swaps += std::popcount(a >> (j + 1));
  }
  swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

int conjugationSign(BasisMask a) noexcept {
  const int k = grade(a);
  return ((k * (k + 1) / 2) & 1) ? -1 : 1;
}

CliffordNum::CliffordNum(int n) : n_(n) {
  checkN(n);
  coeffs_.assign(std::size_t{1} << n, 0.0);
}

CliffordNum::CliffordNum(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  checkN(n);
  if (coeffs_.size() != (std::size_t{1} << n)) {
    throw DimensionError("expected " + std::to_string(std::size_t{1} << n) +
                         " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

CliffordNum CliffordNum::scalar(int n, double value) {
  CliffordNum out(n);
  out.coeffs_[0] = value;
  return out;
}

CliffordNum CliffordNum::basis(int n, BasisMask mask, double value) {
  CliffordNum out(n);
  if (mask >= out.size()) throw DimensionError("basis mask out of range");
  out.coeffs_[mask] = value;
  return out;
}

bool CliffordNum::isZero() const noexcept {
  for (double c : coeffs_) {
    if (c != 0.0) return false;
  }
  return true;
}

CliffordNum& CliffordNum::operator+=(const CliffordNum& other) {
  checkSameN(n_, other.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

CliffordNum& CliffordNum::operator-=(const CliffordNum& other) {
  checkSameN(n_, other.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

CliffordNum& CliffordNum::operator*=(double factor) noexcept {
  for (double& c : coeffs_) c *= factor;
  return *this;
}

CliffordNum CliffordNum::operator-() const {
  CliffordNum out(*this);
  out *= -1.0;
  return out;
}

CliffordNum cliffordProduct(const CliffordNum& a, const CliffordNum& b) {
  checkSameN(a.n(), b.n());
  CliffordNum out(a.n());
  const auto dim = static_cast<BasisMask>(a.size());
  for (BasisMask i = 0; i < dim; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (BasisMask j = 0; j < dim; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      out[i ^ j] += basisProductSign(i, j) * ai * bj;
    }
  }
  return out;
}

CliffordNum conjugate(const CliffordNum& a) {
  CliffordNum out(a);
  for (BasisMask i = 0; i < out.size(); ++i) out[i] *= conjugationSign(i);
  return out;
}

double absValue(const CliffordNum& a) {
  double sum = 0.0;
  for (double c : a.coeffs()) sum += c * c;
  return std::sqrt(sum);
}

Paravector::Paravector(double s0, std::vector<double> imag) : s0_(s0), imag_(std::move(imag)) {
  checkN(static_cast<int>(imag_.size()));
}

Paravector Paravector::real(int n, double x) { return Paravector(x, std::vector<double>(n, 0.0)); }

Paravector Paravector::unit(int n, int i) {
  if (i < 1 || i > n) throw DimensionError("unit index outside 1..n");
  std::vector<double> v(n, 0.0);
  v[i - 1] = 1.0;
  return Paravector(0.0, std::move(v));
}

Paravector Paravector::inSlice(double x, double y, const Paravector& J) {
  std::vector<double> v(J.imag().begin(), J.imag().end());
  for (double& c : v) c *= y;
  return Paravector(x, std::move(v));
}

double Paravector::absImagSquared() const noexcept {
  double sum = 0.0;
  for (double c : imag_) sum += c * c;
  return sum;
}

double Paravector::absImag() const noexcept { return std::sqrt(absImagSquared()); }
double Paravector::absSquared() const noexcept { return s0_ * s0_ + absImagSquared(); }
double Paravector::abs() const noexcept { return std::sqrt(absSquared()); }

bool Paravector::isZero() const noexcept {
  if (s0_ != 0.0) return false;
  for (double c : imag_) {
    if (c != 0.0) return false;
  }
  return true;
}

Paravector Paravector::conjugate() const {
  std::vector<double> v(imag_);
  for (double& c : v) c = -c;
  return Paravector(s0_, std::move(v));
}

Paravector Paravector::operator*(double f) const {
  std::vector<double> v(imag_);
  for (double& c : v) c *= f;
  return Paravector(s0_ * f, std::move(v));
}

CliffordNum Paravector::toClifford() const {
  CliffordNum out(n());
  out[0] = s0_;
  for (int i = 0; i < n(); ++i) out[BasisMask{1} << i] = imag_[i];
  return out;
}

bool isImaginaryUnit(const Paravector& J, double tol) {
  return J.s0() == 0.0 && std::abs(J.absImag() - 1.0) <= tol;
}

PolarForm polarDecompose(const Paravector& s, const Paravector& defaultJ) {
  if (s.isZero()) throw DomainError("polar decomposition of the zero paravector");
  if (!isImaginaryUnit(defaultJ)) throw ArgumentError("default J is not an imaginary unit");
  if (defaultJ.n() != s.n()) throw DimensionError("default J lives in a different algebra");
  const double y = s.absImag();
  const double r = s.abs();
  const double phi = std::atan2(y, s.s0());
  if (y == 0.0) return {r, defaultJ, phi};
  std::vector<double> j(s.imag().begin(), s.imag().end());
  for (double& c : j) c /= y;
  return {r, Paravector(0.0, std::move(j)), phi};
}

PolarForm polarDecompose(const Paravector& s) {
  return polarDecompose(s, Paravector::unit(s.n(), 1));
}

DoubleSector::DoubleSector(double omega) : omega_(omega) {
  if (!(omega > 0.0 && omega < std::numbers::pi / 2)) {
    throw ArgumentError("sector angle must lie in (0, pi/2)");
  }
}

bool DoubleSector::contains(double x, double y) const noexcept {
  if (x == 0.0 && y == 0.0) return false;
  const double phi = std::atan2(std::abs(y), x);  // in [0, pi]
  return phi < omega_ || phi > std::numbers::pi - omega_;
}

bool DoubleSector::containsClosure(double x, double y) const noexcept {
  if (x == 0.0 && y == 0.0) return true;
  const double phi = std::atan2(std::abs(y), x);
  return phi <= omega_ || phi >= std::numbers::pi - omega_;
}

bool inSector(const Paravector& s, const DoubleSector& sector) {
  return sector.contains(s.s0(), s.absImag());
}

}  // namespace sspec
