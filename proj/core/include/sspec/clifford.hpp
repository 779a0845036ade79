#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sspec {

/// Largest supported number of imaginary units; 2^6 = 64 coefficients.
inline constexpr int kMaxGenerators = 6;

/// Subset of {1,...,n} encoded as a bit mask; bit i-1 stands for e_i.
/// The empty mask is the scalar unit. Canonical basis order is ascending mask.
using BasisMask = std::uint32_t;

int grade(BasisMask a) noexcept;

/// Sign s with e_a e_b = s e_{a^b}: transpositions needed to merge the two
/// sorted generator lists, plus one factor -1 per repeated generator.
int basisProductSign(BasisMask a, BasisMask b) noexcept;

/// (-1)^{|A|(|A|+1)/2}, the sign conjugation puts on e_A.
int conjugationSign(BasisMask a) noexcept;

/// Element of the real Clifford algebra R_n, stored as 2^n coefficients.
class CliffordNum {
 public:
  explicit CliffordNum(int n);
  CliffordNum(int n, std::vector<double> coeffs);

  static CliffordNum scalar(int n, double value);
  static CliffordNum basis(int n, BasisMask mask, double value = 1.0);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  double operator[](BasisMask a) const { return coeffs_[a]; }
  double& operator[](BasisMask a) { return coeffs_[a]; }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  double scalarPart() const noexcept { return coeffs_[0]; }
  bool isZero() const noexcept;

  CliffordNum& operator+=(const CliffordNum& other);
  CliffordNum& operator-=(const CliffordNum& other);
  CliffordNum& operator*=(double factor) noexcept;

  friend CliffordNum operator+(CliffordNum a, const CliffordNum& b) { return a += b; }
  friend CliffordNum operator-(CliffordNum a, const CliffordNum& b) { return a -= b; }
  friend CliffordNum operator*(CliffordNum a, double f) { return a *= f; }
  friend CliffordNum operator*(double f, CliffordNum a) { return a *= f; }
  CliffordNum operator-() const;

  bool operator==(const CliffordNum&) const = default;

 private:
  int n_;
  std::vector<double> coeffs_;
};

/// Bilinear, associative product of R_n. Throws DimensionError if n differs.
CliffordNum cliffordProduct(const CliffordNum& a, const CliffordNum& b);
inline CliffordNum operator*(const CliffordNum& a, const CliffordNum& b) {
  return cliffordProduct(a, b);
}

CliffordNum conjugate(const CliffordNum& a);

/// Euclidean norm of the coefficient vector.
double absValue(const CliffordNum& a);

/// s = s0 + s1 e_1 + ... + sn e_n.
class Paravector {
 public:
  Paravector(double s0, std::vector<double> imag);

  static Paravector real(int n, double x);
  /// e_i for 1 <= i <= n.
  static Paravector unit(int n, int i);
  /// x + J y for an imaginary unit J.
  static Paravector inSlice(double x, double y, const Paravector& J);

  int n() const noexcept { return static_cast<int>(imag_.size()); }
  double s0() const noexcept { return s0_; }
  std::span<const double> imag() const noexcept { return imag_; }

  double absImagSquared() const noexcept;
  double absImag() const noexcept;
  double absSquared() const noexcept;
  double abs() const noexcept;
  bool isZero() const noexcept;

  Paravector conjugate() const;
  Paravector operator*(double f) const;
  CliffordNum toClifford() const;

  bool operator==(const Paravector&) const = default;

 private:
  double s0_;
  std::vector<double> imag_;
};

/// True if J has zero real part and unit modulus to `tol`.
bool isImaginaryUnit(const Paravector& J, double tol = 1e-12);

struct PolarForm {
  double r;
  Paravector J;
  double phi;  // angle of (s0, |Im s|), in [0, pi]
};

/// s = r (cos phi + J sin phi). On the real axis J is `defaultJ`.
/// Throws DomainError for s = 0.
PolarForm polarDecompose(const Paravector& s, const Paravector& defaultJ);
PolarForm polarDecompose(const Paravector& s);

/// D_omega = { r e^{J phi} : r > 0, phi in (-omega, omega) u (pi-omega, pi+omega) }.
class DoubleSector {
 public:
  explicit DoubleSector(double omega);
  double omega() const noexcept { return omega_; }

  /// Membership from slice coordinates (x, y), y = |Im s| (sign of y ignored).
  bool contains(double x, double y) const noexcept;
  /// Closed sector, including the origin.
  bool containsClosure(double x, double y) const noexcept;

 private:
  double omega_;
};

bool inSector(const Paravector& s, const DoubleSector& sector);

}  // namespace sspec
