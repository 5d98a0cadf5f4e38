// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bpop/densela.hpp"
#include "bpop/random.hpp"

using namespace bpop;

namespace
{

ComplexMatrix randomComplex(Index rows, Index cols, Lcg64 &rng)
{
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
  {
    for (Index j = 0; j < cols; ++j)
    {
      m(i, j) = Complex(rng.symmetric(), rng.symmetric());
    }
  }
  return m;
}

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d)
{
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

bool containsValue(const ComplexVector &v, Complex z, double tol)
{
  for (Index i = 0; i < v.size(); ++i)
  {
    if (std::abs(v(i) - z) <= tol)
    {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("hermitianEigen hand examples")
{
  auto e = hermitianEigen(mat2(1, 0, 0, 4)).eigenvalues;
  CHECK(e(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(e(1) == doctest::Approx(1.0).epsilon(1e-12));

  e = hermitianEigen(ComplexMatrix::Identity(3, 3)).eigenvalues;
  for (Index i = 0; i < 3; ++i)
  {
    CHECK(std::abs(e(i) - 1.0) < 1e-14);
  }

  e = hermitianEigen(mat2(2, 1, 1, 2)).eigenvalues;
  CHECK(std::abs(e(0) - 3.0) < 1e-12);
  CHECK(std::abs(e(1) - 1.0) < 1e-12);
}

TEST_CASE("hermitianEigen rejects non-Hermitian input")
{
  CHECK_THROWS_AS(hermitianEigen(mat2(1, 2, 0, 1)), NumericError);
}

TEST_CASE("generalEigen hand examples")
{
  const Complex i(0.0, 1.0);
  auto e = generalEigen(mat2(2, 0, 0, i)).eigenvalues;
  CHECK(containsValue(e, 2.0, 1e-12));
  CHECK(containsValue(e, i, 1e-12));

  e = generalEigen(mat2(0, 1, 0, 0)).eigenvalues;
  CHECK(e.cwiseAbs().maxCoeff() < 1e-12);

  // companion of z^2 - 3z + 2
  e = generalEigen(mat2(3, -2, 1, 0)).eigenvalues;
  CHECK(std::abs(e(0) - 2.0) < 1e-12);
  CHECK(std::abs(e(1) - 1.0) < 1e-12);
}

TEST_CASE("svd hand examples")
{
  auto s = svd(mat2(3, 0, 0, 1)).singularValues;
  CHECK(std::abs(s(0) - 3.0) < 1e-12);
  CHECK(std::abs(s(1) - 1.0) < 1e-12);

  s = svd(ComplexMatrix::Zero(3, 2)).singularValues;
  CHECK(s.cwiseAbs().maxCoeff() == 0.0);

  s = svd(mat2(0, 2, 1, 0)).singularValues;
  CHECK(std::abs(s(0) - 2.0) < 1e-12);
  CHECK(std::abs(s(1) - 1.0) < 1e-12);
}

TEST_CASE("choleskyHpd and solveLinear hand examples")
{
  CHECK((choleskyHpd(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);
  CHECK((choleskyHpd(mat2(4, 0, 0, 9)) - mat2(2, 0, 0, 3)).norm() < 1e-14);
  CHECK(std::abs(choleskyHpd(mat2(2, 1, 1, 2))(0, 0) - std::sqrt(2.0)) < 1e-14);
  CHECK_THROWS_AS(choleskyHpd(mat2(1, 0, 0, -1)), NumericError);

  ComplexVector b(2);
  b << 2.0, 4.0;
  CHECK((solveLinear(ComplexMatrix::Identity(2, 2), b) - b).norm() < 1e-15);
  CHECK((solveLinear(mat2(2, 0, 0, 4), b) - ComplexVector::Ones(2)).norm() < 1e-15);
  b << 2.0, 1.0;
  CHECK((solveLinear(mat2(1, 1, 0, 1), b) - ComplexVector::Ones(2)).norm() < 1e-15);
  CHECK_THROWS_AS(solveLinear(mat2(1, 1, 1, 1), b), NumericError);
}

TEST_CASE("Jacobi routines agree with Eigen's solvers")
{
  Lcg64 rng(7);
  for (int trial = 0; trial < 10; ++trial)
  {
    const Index n = 3 + trial;
    const ComplexMatrix g = randomComplex(n, n, rng);
    const ComplexMatrix h = g + g.adjoint();
    const RealVector mine = hermitianEigen(h, false).eigenvalues;
    RealVector ref = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues().reverse();
    CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-10 * ref.cwiseAbs().maxCoeff());

    const ComplexMatrix r = randomComplex(n + 2, n, rng);
    const RealVector s = svd(r).singularValues;
    const RealVector sref = Eigen::JacobiSVD<ComplexMatrix>(r).singularValues();
    CHECK((s - sref).cwiseAbs().maxCoeff() < 1e-10 * sref(0));
    // wide input goes through the adjoint
    CHECK((svd(r.adjoint().eval()).singularValues - sref).cwiseAbs().maxCoeff() < 1e-10 * sref(0));
  }
}

TEST_CASE("factors reconstruct the input")
{
  Lcg64 rng(11);
  const ComplexMatrix g = randomComplex(6, 6, rng);
  const ComplexMatrix h = g * g.adjoint() + ComplexMatrix::Identity(6, 6);
  const auto eig = hermitianEigen(h, true);
  const ComplexMatrix &q = *eig.eigenvectors;
  CHECK((q * eig.eigenvalues.cast<Complex>().asDiagonal() * q.adjoint() - h).norm() < 1e-10 * h.norm());

  const auto f = svd(g, true);
  CHECK((*f.u * f.singularValues.cast<Complex>().asDiagonal() * f.v->adjoint() - g).norm() < 1e-10 * g.norm());

  const ComplexMatrix l = choleskyHpd(h);
  CHECK((l * l.adjoint() - h).norm() < 1e-12 * h.norm());

  const auto ge = generalEigen(g, true, true);
  CHECK(ge.converged);
  for (Index i = 0; i < 6; ++i)
  {
    const ComplexVector v = ge.eigenvectors->col(i);
    CHECK((g * v - ge.eigenvalues(i) * v).norm() < 1e-10 * g.norm() * v.norm());
  }
}

TEST_CASE("properties on random matrices")
{
  Lcg64 rng(3);
  for (int trial = 0; trial < 100; ++trial)
  {
    const Index n = 2 + trial % 7;
    const ComplexMatrix a = randomComplex(n, n, rng) + 2.0 * double(n) * ComplexMatrix::Identity(n, n);
    const ComplexVector x = randomComplex(n, 1, rng);
    const ComplexVector b = a * x;
    CHECK((solveLinear(a, b) - x).norm() <= 1e-10 * x.norm());
  }

  for (int trial = 0; trial < 10; ++trial)
  {
    const Index n = 4 + trial;
    const ComplexMatrix g = randomComplex(n, n, rng);
    // HPD gives positive eigenvalues
    CHECK(hermitianEigen(g * g.adjoint() + 1e-3 * ComplexMatrix::Identity(n, n), false).eigenvalues.minCoeff() > 0.0);
    // kappa_2 >= kappa_S
    CHECK(conditionNumber2(g) >= spectralConditionNumber(g) * (1.0 - 1e-10));

    // normal matrix: sigma_j = |lambda_j|
    const ComplexMatrix u = *hermitianEigen(g + g.adjoint(), true).eigenvectors;
    const ComplexVector lambda = randomComplex(n, 1, rng);
    const ComplexMatrix normal = u * lambda.asDiagonal() * u.adjoint();
    const RealVector s = svd(normal).singularValues;
    const ComplexVector e = generalEigen(normal).eigenvalues;
    for (Index i = 0; i < n; ++i)
    {
      CHECK(std::abs(s(i) - std::abs(e(i))) < 1e-10);
    }
  }
}

TEST_CASE("hermitianFunction gives square roots")
{
  ComplexMatrix h(2, 2);
  h << 2, 1, 1, 2;
  const ComplexMatrix r = hermitianFunction(h, [](double x) { return std::sqrt(x); });
  CHECK((r * r - h).norm() < 1e-13);
  CHECK(std::abs(norm2(h) - 3.0) < 1e-13);
  CHECK(std::abs(conditionNumber2(h) - 3.0) < 1e-13);
}
