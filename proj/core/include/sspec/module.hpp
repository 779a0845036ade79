#pragma once

// Clifford-module vectors V = R^m (x) R_n and right-linear operators acting on
// them as m x m matrices of Clifford numbers multiplying from the left.
//
// Flattening order is module index major, basis mask minor: coefficient
// (i, A) sits at position i * 2^n + A. Serialized data and the real
// representation both use this order.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sspec/clifford.hpp"

namespace sspec {

/// Relative singular-value threshold below which an operator counts as singular.
inline constexpr double kInvertibilityTol = 1e-10;

class ModuleVector {
 public:
  ModuleVector(int n, int m);
  explicit ModuleVector(std::vector<CliffordNum> entries);

  static ModuleVector fromFlat(int n, int m, const Eigen::VectorXd& flat);

  int n() const noexcept { return n_; }
  int m() const noexcept { return static_cast<int>(entries_.size()); }

  const CliffordNum& operator[](int i) const { return entries_[i]; }
  CliffordNum& operator[](int i) { return entries_[i]; }
  std::span<const CliffordNum> entries() const noexcept { return entries_; }

  Eigen::VectorXd flatten() const;
  double norm() const;

  ModuleVector& operator+=(const ModuleVector& other);
  ModuleVector& operator-=(const ModuleVector& other);
  ModuleVector& operator*=(double f);
  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator*(ModuleVector a, double f) { return a *= f; }

  bool operator==(const ModuleVector&) const = default;

 private:
  int n_;
  std::vector<CliffordNum> entries_;
};

class CliffordOperator {
 public:
  CliffordOperator(int n, int m);
  /// Row-major m*m entries.
  CliffordOperator(int n, int m, std::vector<CliffordNum> entries);

  static CliffordOperator identity(int n, int m);
  static CliffordOperator diagonal(int n, const std::vector<double>& values);
  /// Real m x m matrix embedded as scalar entries.
  static CliffordOperator fromRealMatrix(int n, const Eigen::MatrixXd& a);
  /// s * Id.
  static CliffordOperator scalarMultiple(const CliffordNum& s, int m);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  /// Dimension of the real representation, m * 2^n.
  int realDim() const noexcept { return m_ << n_; }

  const CliffordNum& operator()(int i, int j) const { return entries_[i * m_ + j]; }
  CliffordNum& operator()(int i, int j) { return entries_[i * m_ + j]; }
  std::span<const CliffordNum> entries() const noexcept { return entries_; }

  ModuleVector apply(const ModuleVector& v) const;

  CliffordOperator& operator+=(const CliffordOperator& other);
  CliffordOperator& operator-=(const CliffordOperator& other);
  CliffordOperator& operator*=(double f);
  friend CliffordOperator operator+(CliffordOperator a, const CliffordOperator& b) { return a += b; }
  friend CliffordOperator operator-(CliffordOperator a, const CliffordOperator& b) { return a -= b; }
  friend CliffordOperator operator*(CliffordOperator a, double f) { return a *= f; }
  friend CliffordOperator operator*(double f, CliffordOperator a) { return a *= f; }

  bool operator==(const CliffordOperator&) const = default;

 private:
  int n_;
  int m_;
  std::vector<CliffordNum> entries_;
};

/// Composition (S T)v = S(T v).
CliffordOperator compose(const CliffordOperator& s, const CliffordOperator& t);
inline CliffordOperator operator*(const CliffordOperator& s, const CliffordOperator& t) {
  return compose(s, t);
}

/// Operator v -> s (T v).
CliffordOperator leftScalar(const CliffordNum& s, const CliffordOperator& t);
/// Operator v -> T (s v); this is what "T s" means for operator-valued integrands.
CliffordOperator rightScalar(const CliffordOperator& t, const CliffordNum& s);

/// Faithful real matrix of a Clifford operator on flattened coefficients.
struct RealRepresentation {
  int n;
  int m;
  Eigen::MatrixXd matrix;
  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

RealRepresentation realRepresentation(const CliffordOperator& t);

/// Inverse of realRepresentation. Reads the Clifford entries off the columns
/// belonging to the scalar basis element; exact for matrices that commute with
/// right multiplication (every product, sum and inverse of represented operators).
CliffordOperator fromRealRepresentation(int n, int m, const Eigen::MatrixXd& matrix);

/// 2^n x 2^n matrix of x -> s x on R_n.
Eigen::MatrixXd leftMultiplicationMatrix(const CliffordNum& s);
/// Block diagonal matrix of v -> s v on V.
Eigen::MatrixXd blockLeftMultiplication(const CliffordNum& s, int m);

/// <v, w> = sum_{A,B} <v_A, w_B> conj(e_A) e_B.
CliffordNum innerProduct(const ModuleVector& v, const ModuleVector& w);

ModuleVector scalarMulLeft(const CliffordNum& s, const ModuleVector& v);
ModuleVector scalarMulRight(const ModuleVector& v, const CliffordNum& s);

/// Bar-transpose: (T*)_{ij} = conj(T_{ji}).
CliffordOperator adjointOperator(const CliffordOperator& t);

struct AdjointPair {
  CliffordOperator op;
  CliffordOperator adjoint;
};
AdjointPair makeAdjointPair(const CliffordOperator& t);

struct SingularRange {
  double min;
  double max;
};
SingularRange singularRange(const Eigen::MatrixXd& a);
double spectralNorm(const Eigen::MatrixXd& a);

/// Largest singular value of the real representation.
double operatorNorm(const CliffordOperator& t);

/// LU factorization of rho(T), guarded by the invertibility threshold.
/// Safe to share for reads once constructed.
class OperatorSolver {
 public:
  explicit OperatorSolver(const CliffordOperator& t);
  explicit OperatorSolver(const Eigen::MatrixXd& real);

  /// Solves with one round of iterative refinement.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  double sigmaMin() const noexcept { return range_.min; }
  double sigmaMax() const noexcept { return range_.max; }
  double conditionNumber() const noexcept { return range_.max / range_.min; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  SingularRange range_;
};

/// v with T v = w. Throws NotInvertibleError when sigma_min(rho(T)) <= 1e-10 sigma_max.
ModuleVector solveOperator(const CliffordOperator& t, const ModuleVector& w);

/// Operator inverse through the real representation (same guard as solveOperator).
CliffordOperator inverseOperator(const CliffordOperator& t);

}  // namespace sspec
