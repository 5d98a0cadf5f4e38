// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bpop/config.hpp"
#include "bpop/error.hpp"

namespace bpop
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct HermitianEigenResult
{
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  DenseVector<RealScalar> eigenvalues;  // descending
  std::optional<DenseMatrix<Scalar>> eigenvectors;
  int sweeps = 0;
};

template <typename Scalar>
struct EigenResult
{
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using ComplexScalar = std::complex<RealScalar>;
  DenseVector<ComplexScalar> eigenvalues;  // descending modulus
  std::optional<DenseMatrix<ComplexScalar>> eigenvectors;
  bool converged = true;
};

template <typename Scalar>
struct SvdResult
{
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  DenseVector<RealScalar> singularValues;  // non-increasing
  std::optional<DenseMatrix<Scalar>> u;
  std::optional<DenseMatrix<Scalar>> v;
  int sweeps = 0;
};

namespace detail
{

template <typename Derived>
void requireSquare(const Eigen::MatrixBase<Derived> &m, const char *where)
{
  if (m.rows() != m.cols())
  {
    throw NumericError(ErrorCode::NonSquare, std::string(where) + ": matrix is " +
                                                 std::to_string(m.rows()) + "x" +
                                                 std::to_string(m.cols()));
  }
}

template <typename RealScalar>
std::vector<Index> descendingOrder(const DenseVector<RealScalar> &key)
{
  std::vector<Index> order(static_cast<std::size_t>(key.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return key(a) > key(b); });
  return order;
}

}  // namespace detail

template <typename Derived>
bool isHermitian(const Eigen::MatrixBase<Derived> &m, double relTol = config::hermitianTol)
{
  if (m.rows() != m.cols())
  {
    return false;
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0)
  {
    return true;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= relTol * scale;
}

// Cyclic Jacobi with the relative-accuracy rotation threshold
// |a_pq| > tol * sqrt(|a_pp a_qq|).
template <typename Derived>
HermitianEigenResult<typename Derived::Scalar> hermitianEigen(const Eigen::MatrixBase<Derived> &m,
                                                             bool wantVectors = true)
{
  using Scalar = typename Derived::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  detail::requireSquare(m, "hermitianEigen");
  if (!isHermitian(m))
  {
    throw NumericError(ErrorCode::NonHermitian, "hermitianEigen: input fails the relative symmetry check");
  }

  const Index n = m.rows();
  DenseMatrix<Scalar> a = (m + m.adjoint()) / RealScalar(2);
  DenseMatrix<Scalar> v;
  if (wantVectors)
  {
    v = DenseMatrix<Scalar>::Identity(n, n);
  }

  HermitianEigenResult<Scalar> out;
  bool done = (n < 2);
  while (!done && out.sweeps < config::jacobiMaxSweeps)
  {
    ++out.sweeps;
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p)
    {
      for (Index q = p + 1; q < n; ++q)
      {
        const Scalar apq = a(p, q);
        const RealScalar mag = std::abs(apq);
        const RealScalar app = Eigen::numext::real(a(p, p));
        const RealScalar aqq = Eigen::numext::real(a(q, q));
        if (mag <= std::numeric_limits<RealScalar>::min() ||
            mag <= RealScalar(config::jacobiTol) * std::sqrt(std::abs(app * aqq)))
        {
          continue;
        }
        Eigen::JacobiRotation<Scalar> j;
        j.makeJacobi(app, apq, aqq);
        a.applyOnTheLeft(p, q, j.adjoint());
        a.applyOnTheRight(p, q, j);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        if (wantVectors)
        {
          v.applyOnTheRight(p, q, j);
        }
        rotated = true;
      }
    }
    done = !rotated;
  }
  if (!done)
  {
    throw NumericError(ErrorCode::NoConvergence, "hermitianEigen: Jacobi sweep cap reached");
  }

  DenseVector<RealScalar> diag = a.diagonal().real();
  const auto order = detail::descendingOrder(diag);
  out.eigenvalues.resize(n);
  if (wantVectors)
  {
    out.eigenvectors = DenseMatrix<Scalar>(n, n);
  }
  for (Index i = 0; i < n; ++i)
  {
    out.eigenvalues(i) = diag(order[i]);
    if (wantVectors)
    {
      out.eigenvectors->col(i) = v.col(order[i]);
    }
  }
  return out;
}

// Hessenberg reduction and shifted QR (Eigen's complex Schur), sorted by
// descending modulus. With validate=true every eigenvalue is checked by
// sigma_min(m - lambda I) <= tol * ||m||.
template <typename Derived>
EigenResult<typename Derived::Scalar> generalEigen(const Eigen::MatrixBase<Derived> &m,
                                                   bool wantVectors = false, bool validate = false);

// One-sided (Hestenes) Jacobi. Column norms are tracked incrementally.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived> &m, bool wantFactors = false)
{
  using Scalar = typename Derived::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  if (m.rows() < m.cols())
  {
    const DenseMatrix<Scalar> adj = m.adjoint();
    auto t = svd(adj, wantFactors);
    SvdResult<Scalar> out;
    out.singularValues = std::move(t.singularValues);
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    out.sweeps = t.sweeps;
    return out;
  }

  const Index cols = m.cols();
  DenseMatrix<Scalar> u = m;
  DenseMatrix<Scalar> v;
  if (wantFactors)
  {
    v = DenseMatrix<Scalar>::Identity(cols, cols);
  }
  DenseVector<RealScalar> norms2(cols);
  for (Index j = 0; j < cols; ++j)
  {
    norms2(j) = u.col(j).squaredNorm();
  }

  SvdResult<Scalar> out;
  bool done = (cols < 2);
  while (!done && out.sweeps < config::jacobiMaxSweeps)
  {
    ++out.sweeps;
    bool rotated = false;
    for (Index p = 0; p < cols - 1; ++p)
    {
      for (Index q = p + 1; q < cols; ++q)
      {
        const RealScalar alpha = norms2(p);
        const RealScalar beta = norms2(q);
        if (alpha == RealScalar(0) || beta == RealScalar(0))
        {
          continue;
        }
        const Scalar gamma = u.col(p).dot(u.col(q));
        const RealScalar mag = std::abs(gamma);
        if (mag <= std::numeric_limits<RealScalar>::min() ||
            mag <= RealScalar(config::jacobiTol) * std::sqrt(alpha * beta))
        {
          continue;
        }
        Eigen::JacobiRotation<Scalar> j;
        j.makeJacobi(alpha, gamma, beta);
        u.applyOnTheRight(p, q, j);
        if (wantFactors)
        {
          v.applyOnTheRight(p, q, j);
        }
        norms2(p) = u.col(p).squaredNorm();
        norms2(q) = u.col(q).squaredNorm();
        rotated = true;
      }
    }
    done = !rotated;
  }

  DenseVector<RealScalar> sigma(cols);
  for (Index j = 0; j < cols; ++j)
  {
    sigma(j) = u.col(j).norm();
  }
  const auto order = detail::descendingOrder(sigma);
  out.singularValues.resize(cols);
  if (wantFactors)
  {
    out.u = DenseMatrix<Scalar>::Zero(m.rows(), cols);
    out.v = DenseMatrix<Scalar>(cols, cols);
  }
  for (Index i = 0; i < cols; ++i)
  {
    const Index src = order[i];
    out.singularValues(i) = sigma(src);
    if (wantFactors)
    {
      if (sigma(src) > RealScalar(0))
      {
        out.u->col(i) = u.col(src) / sigma(src);
      }
      out.v->col(i) = v.col(src);
    }
  }
  return out;
}

template <typename Derived>
EigenResult<typename Derived::Scalar> generalEigen(const Eigen::MatrixBase<Derived> &m, bool wantVectors,
                                                   bool validate)
{
  using Scalar = typename Derived::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using ComplexScalar = std::complex<RealScalar>;
  detail::requireSquare(m, "generalEigen");

  const Index n = m.rows();
  EigenResult<Scalar> out;
  if (n == 0)
  {
    return out;
  }
  DenseMatrix<ComplexScalar> mc = m.template cast<ComplexScalar>();
  Eigen::ComplexEigenSolver<DenseMatrix<ComplexScalar>> solver;
  solver.setMaxIterations(config::schurMaxIterationsPerRow * n);
  solver.compute(mc, wantVectors);
  out.converged = (solver.info() == Eigen::Success);

  const DenseVector<ComplexScalar> &values = solver.eigenvalues();
  DenseVector<RealScalar> modulus = values.cwiseAbs();
  const auto order = detail::descendingOrder(modulus);
  out.eigenvalues.resize(n);
  if (wantVectors)
  {
    out.eigenvectors = DenseMatrix<ComplexScalar>(n, n);
  }
  for (Index i = 0; i < n; ++i)
  {
    out.eigenvalues(i) = values(order[i]);
    if (wantVectors)
    {
      out.eigenvectors->col(i) = solver.eigenvectors().col(order[i]);
    }
  }

  if (validate && out.converged)
  {
    const RealScalar scale = svd(mc).singularValues(0);
    for (Index i = 0; i < n; ++i)
    {
      DenseMatrix<ComplexScalar> shifted = mc;
      shifted.diagonal().array() -= out.eigenvalues(i);
      const RealScalar smin = svd(shifted).singularValues(n - 1);
      if (smin > RealScalar(config::eigenResidualTol) * std::max(scale, RealScalar(1e-300)))
      {
        out.converged = false;
        break;
      }
    }
  }
  return out;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> choleskyHpd(const Eigen::MatrixBase<Derived> &m)
{
  using Scalar = typename Derived::Scalar;
  detail::requireSquare(m, "choleskyHpd");
  if (!isHermitian(m))
  {
    throw NumericError(ErrorCode::NotPositiveDefinite, "choleskyHpd: input is not Hermitian");
  }
  Eigen::LLT<DenseMatrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success)
  {
    throw NumericError(ErrorCode::NotPositiveDefinite, "choleskyHpd: non-positive pivot");
  }
  return llt.matrixL();
}

// Partial-pivot LU with an explicit pivot floor relative to the 1-norm.
template <typename Scalar>
class LuSolver
{
public:
  template <typename Derived>
  explicit LuSolver(const Eigen::MatrixBase<Derived> &m) : lu_(m.rows())
  {
    detail::requireSquare(m, "solveLinear");
    lu_.compute(m);
    const auto norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    const auto pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (m.rows() > 0 && !(pivot > config::singularPivotTol * norm1))
    {
      throw NumericError(ErrorCode::Singular, "solveLinear: pivot below 1e-14 ||m||");
    }
  }

  Index size() const { return lu_.rows(); }

  template <typename Rhs>
  DenseMatrix<Scalar> solve(const Eigen::MatrixBase<Rhs> &rhs) const
  {
    if (rhs.rows() != lu_.rows())
    {
      throw NumericError(ErrorCode::DimensionMismatch, "solveLinear: rhs length differs from matrix size");
    }
    return lu_.solve(rhs);
  }

  DenseMatrix<Scalar> inverse() const { return lu_.inverse(); }

private:
  Eigen::PartialPivLU<DenseMatrix<Scalar>> lu_;
};

template <typename Derived, typename Rhs>
DenseVector<typename Derived::Scalar> solveLinear(const Eigen::MatrixBase<Derived> &m,
                                                  const Eigen::MatrixBase<Rhs> &rhs)
{
  return LuSolver<typename Derived::Scalar>(m).solve(rhs);
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived> &m)
{
  return LuSolver<typename Derived::Scalar>(m).inverse();
}

// f(H) for Hermitian H, via hermitianEigen; f applied to each eigenvalue.
template <typename Derived, typename F>
DenseMatrix<typename Derived::Scalar> hermitianFunction(const Eigen::MatrixBase<Derived> &h, F f)
{
  auto eig = hermitianEigen(h, true);
  const auto &q = *eig.eigenvectors;
  auto fl = eig.eigenvalues.unaryExpr(f).eval();
  return q * fl.asDiagonal() * q.adjoint();
}

template <typename Derived>
double norm2(const Eigen::MatrixBase<Derived> &m)
{
  if (m.size() == 0)
  {
    return 0.0;
  }
  return svd(m).singularValues(0);
}

// sigma_1 / sigma_N
template <typename Derived>
double conditionNumber2(const Eigen::MatrixBase<Derived> &m)
{
  auto s = svd(m).singularValues;
  return s(0) / s(s.size() - 1);
}

// |lambda|_max / |lambda|_min
template <typename Derived>
double spectralConditionNumber(const Eigen::MatrixBase<Derived> &m)
{
  auto e = generalEigen(m).eigenvalues;
  return std::abs(e(0)) / std::abs(e(e.size() - 1));
}

}  // namespace bpop
