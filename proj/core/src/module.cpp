#include "sspec/module.hpp"

#include <cmath>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {

namespace {

void requireSameShape(int n1, int m1, int n2, int m2) {
  if (n1 != n2 || m1 != m2) {
    throw DimensionError("shape mismatch: (n=" + std::to_string(n1) + ", m=" + std::to_string(m1) +
                         ") vs (n=" + std::to_string(n2) + ", m=" + std::to_string(m2) + ")");
  }
}

}  // namespace

ModuleVector::ModuleVector(int n, int m) : n_(n) {
  if (m < 1) throw DimensionError("module dimension m must be positive");
  entries_.assign(m, CliffordNum(n));
}

ModuleVector::ModuleVector(std::vector<CliffordNum> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("module vector needs at least one entry");
  n_ = entries_.front().n();
  for (const auto& e : entries_) {
    if (e.n() != n_) throw DimensionError("module vector entries from different algebras");
  }
}

ModuleVector ModuleVector::fromFlat(int n, int m, const Eigen::VectorXd& flat) {
  ModuleVector v(n, m);
  const int block = 1 << n;
  if (flat.size() != static_cast<Eigen::Index>(m) * block) {
    throw DimensionError("flat vector length does not match m * 2^n");
  }
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < block; ++a) v[i][a] = flat[i * block + a];
  }
  return v;
}

Eigen::VectorXd ModuleVector::flatten() const {
  const int block = 1 << n_;
  Eigen::VectorXd out(m() * block);
  for (int i = 0; i < m(); ++i) {
    for (int a = 0; a < block; ++a) out[i * block + a] = entries_[i][a];
  }
  return out;
}

double ModuleVector::norm() const { return flatten().norm(); }

ModuleVector& ModuleVector::operator+=(const ModuleVector& other) {
  requireSameShape(n_, m(), other.n_, other.m());
  for (int i = 0; i < m(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other) {
  requireSameShape(n_, m(), other.n_, other.m());
  for (int i = 0; i < m(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ModuleVector& ModuleVector::operator*=(double f) {
  for (auto& e : entries_) e *= f;
  return *this;
}

CliffordOperator::CliffordOperator(int n, int m) : n_(n), m_(m) {
  if (m < 1) throw DimensionError("operator dimension m must be positive");
  entries_.assign(static_cast<std::size_t>(m) * m, CliffordNum(n));
}

CliffordOperator::CliffordOperator(int n, int m, std::vector<CliffordNum> entries)
    : n_(n), m_(m), entries_(std::move(entries)) {
  if (m < 1) throw DimensionError("operator dimension m must be positive");
  if (entries_.size() != static_cast<std::size_t>(m) * m) {
    throw DimensionError("operator needs m*m = " + std::to_string(m * m) + " entries, got " +
                         std::to_string(entries_.size()));
  }
  for (const auto& e : entries_) {
    if (e.n() != n) throw DimensionError("operator entry from a different algebra");
  }
}

CliffordOperator CliffordOperator::identity(int n, int m) {
  CliffordOperator t(n, m);
  for (int i = 0; i < m; ++i) t(i, i)[0] = 1.0;
  return t;
}

CliffordOperator CliffordOperator::diagonal(int n, const std::vector<double>& values) {
  CliffordOperator t(n, static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) t(i, i)[0] = values[i];
  return t;
}

CliffordOperator CliffordOperator::fromRealMatrix(int n, const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("real matrix must be square");
  const int m = static_cast<int>(a.rows());
  CliffordOperator t(n, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) t(i, j)[0] = a(i, j);
  }
  return t;
}

CliffordOperator CliffordOperator::scalarMultiple(const CliffordNum& s, int m) {
  CliffordOperator t(s.n(), m);
  for (int i = 0; i < m; ++i) t(i, i) = s;
  return t;
}

ModuleVector CliffordOperator::apply(const ModuleVector& v) const {
  requireSameShape(n_, m_, v.n(), v.m());
  ModuleVector out(n_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

CliffordOperator& CliffordOperator::operator+=(const CliffordOperator& other) {
  requireSameShape(n_, m_, other.n_, other.m_);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

CliffordOperator& CliffordOperator::operator-=(const CliffordOperator& other) {
  requireSameShape(n_, m_, other.n_, other.m_);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

CliffordOperator& CliffordOperator::operator*=(double f) {
  for (auto& e : entries_) e *= f;
  return *this;
}

CliffordOperator compose(const CliffordOperator& s, const CliffordOperator& t) {
  requireSameShape(s.n(), s.m(), t.n(), t.m());
  const int m = s.m();
  CliffordOperator out(s.n(), m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) out(i, k) += s(i, j) * t(j, k);
    }
  }
  return out;
}

CliffordOperator leftScalar(const CliffordNum& s, const CliffordOperator& t) {
  if (s.n() != t.n()) throw DimensionError("scalar from a different algebra");
  CliffordOperator out(t);
  for (int i = 0; i < t.m(); ++i) {
    for (int j = 0; j < t.m(); ++j) out(i, j) = s * t(i, j);
  }
  return out;
}

CliffordOperator rightScalar(const CliffordOperator& t, const CliffordNum& s) {
  if (s.n() != t.n()) throw DimensionError("scalar from a different algebra");
  CliffordOperator out(t);
  for (int i = 0; i < t.m(); ++i) {
    for (int j = 0; j < t.m(); ++j) out(i, j) = t(i, j) * s;
  }
  return out;
}

Eigen::MatrixXd leftMultiplicationMatrix(const CliffordNum& s) {
  const auto block = static_cast<BasisMask>(s.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(block, block);
  for (BasisMask a = 0; a < block; ++a) {
    if (s[a] == 0.0) continue;
    for (BasisMask b = 0; b < block; ++b) l(a ^ b, b) += basisProductSign(a, b) * s[a];
  }
  return l;
}

Eigen::MatrixXd blockLeftMultiplication(const CliffordNum& s, int m) {
  const int block = static_cast<int>(s.size());
  const Eigen::MatrixXd l = leftMultiplicationMatrix(s);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m * block, m * block);
  for (int i = 0; i < m; ++i) out.block(i * block, i * block, block, block) = l;
  return out;
}

RealRepresentation realRepresentation(const CliffordOperator& t) {
  const int block = 1 << t.n();
  const int m = t.m();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(m * block, m * block);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const CliffordNum& e = t(i, j);
      if (e.isZero()) continue;
      rho.block(i * block, j * block, block, block) = leftMultiplicationMatrix(e);
    }
  }
  return {t.n(), m, std::move(rho)};
}

CliffordOperator fromRealRepresentation(int n, int m, const Eigen::MatrixXd& matrix) {
  const int block = 1 << n;
  if (matrix.rows() != m * block || matrix.cols() != m * block) {
    throw DimensionError("real representation has the wrong size");
  }
  CliffordOperator t(n, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < block; ++a) t(i, j)[a] = matrix(i * block + a, j * block);
    }
  }
  return t;
}

CliffordNum innerProduct(const ModuleVector& v, const ModuleVector& w) {
  requireSameShape(v.n(), v.m(), w.n(), w.m());
  CliffordNum out(v.n());
  for (int i = 0; i < v.m(); ++i) out += conjugate(v[i]) * w[i];
  return out;
}

ModuleVector scalarMulLeft(const CliffordNum& s, const ModuleVector& v) {
  if (s.n() != v.n()) throw DimensionError("scalar from a different algebra");
  ModuleVector out(v);
  for (int i = 0; i < v.m(); ++i) out[i] = s * v[i];
  return out;
}

ModuleVector scalarMulRight(const ModuleVector& v, const CliffordNum& s) {
  if (s.n() != v.n()) throw DimensionError("scalar from a different algebra");
  ModuleVector out(v);
  for (int i = 0; i < v.m(); ++i) out[i] = v[i] * s;
  return out;
}

CliffordOperator adjointOperator(const CliffordOperator& t) {
  CliffordOperator out(t.n(), t.m());
  for (int i = 0; i < t.m(); ++i) {
    for (int j = 0; j < t.m(); ++j) out(i, j) = conjugate(t(j, i));
  }
  return out;
}

AdjointPair makeAdjointPair(const CliffordOperator& t) { return {t, adjointOperator(t)}; }

SingularRange singularRange(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  return {s[s.size() - 1], s[0]};
}

double spectralNorm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return singularRange(a).max;
}

double operatorNorm(const CliffordOperator& t) { return spectralNorm(realRepresentation(t).matrix); }

OperatorSolver::OperatorSolver(const CliffordOperator& t)
    : OperatorSolver(realRepresentation(t).matrix) {}

OperatorSolver::OperatorSolver(const Eigen::MatrixXd& real)
    : matrix_(real), lu_(real), range_(singularRange(real)) {
  if (!(range_.min > kInvertibilityTol * range_.max)) {
    throw NotInvertibleError("operator is singular to tolerance (sigma_min = " +
                                 std::to_string(range_.min) + ")",
                             range_.min, range_.max);
  }
}

Eigen::MatrixXd OperatorSolver::solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd x = lu_.solve(rhs);
  const Eigen::MatrixXd residual = rhs - matrix_ * x;
  x += lu_.solve(residual);
  return x;
}

Eigen::VectorXd OperatorSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = lu_.solve(rhs);
  const Eigen::VectorXd residual = rhs - matrix_ * x;
  x += lu_.solve(residual);
  return x;
}

ModuleVector solveOperator(const CliffordOperator& t, const ModuleVector& w) {
  requireSameShape(t.n(), t.m(), w.n(), w.m());
  const OperatorSolver solver(t);
  return ModuleVector::fromFlat(t.n(), t.m(), solver.solve(Eigen::VectorXd(w.flatten())));
}

CliffordOperator inverseOperator(const CliffordOperator& t) {
  const OperatorSolver solver(t);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(t.realDim(), t.realDim());
  return fromRealRepresentation(t.n(), t.m(), solver.solve(id));
}

}  // namespace sspec
