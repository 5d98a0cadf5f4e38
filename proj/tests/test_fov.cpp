// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bpop/fov.hpp"
#include "bpop/random.hpp"

using namespace bpop;

namespace
{

ComplexMatrix randomComplex(Index n, Lcg64 &rng)
{
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
  {
    for (Index j = 0; j < n; ++j)
    {
      m(i, j) = Complex(rng.symmetric(), rng.symmetric());
    }
  }
  return m;
}

ComplexMatrix randomHpd(Index n, Lcg64 &rng)
{
  const ComplexMatrix g = randomComplex(n, rng);
  return g * g.adjoint() + double(n) * ComplexMatrix::Identity(n, n);
}

// Support function through the Cholesky similarity L^H Q L^{-H}, a route
// independent of the Hermitian square root.
double choleskySupport(const ComplexMatrix &q, const ComplexMatrix &gram, double theta)
{
  const ComplexMatrix l = choleskyHpd(gram);
  const ComplexMatrix qhat = l.adjoint() * q * inverse(l.adjoint().eval());
  const ComplexMatrix rot = std::polar(1.0, -theta) * qhat;
  const ComplexMatrix herm = (rot + rot.adjoint()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(herm).eigenvalues().maxCoeff();
}

}  // namespace

TEST_CASE("normal matrices give the hull of the spectrum")
{
  ComplexMatrix q = ComplexMatrix::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 3.0;
  const auto f = fieldOfValues(q, ComplexMatrix::Identity(2, 2));
  CHECK(f.vH == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(f.containsZero);
  for (Index i = 0; i < f.boundaryPoints.size(); ++i)
  {
    CHECK(std::abs(f.boundaryPoints(i).imag()) < 1e-10);
    CHECK(f.boundaryPoints(i).real() >= 1.0 - 1e-10);
    CHECK(f.boundaryPoints(i).real() <= 3.0 + 1e-10);
  }

  q(1, 1) = Complex(0.0, 1.0);
  const auto r = coercivityCheck(q, ComplexMatrix::Identity(2, 2));
  CHECK(r.hNormal);
  CHECK(r.elliptic);
  CHECK(r.vH == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
}

TEST_CASE("identity in any gram")
{
  Lcg64 rng(1);
  const auto f = fieldOfValues(ComplexMatrix::Identity(5, 5), randomHpd(5, rng));
  CHECK(f.vH == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((f.boundaryPoints.array() - Complex(1.0)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("jordan block gives the disk of radius one half")
{
  ComplexMatrix j = ComplexMatrix::Zero(2, 2);
  j(0, 1) = 1.0;
  const auto f = fieldOfValues(j, ComplexMatrix::Identity(2, 2));
  CHECK(f.containsZero);
  CHECK(f.vH == 0.0);
  CHECK((f.supportValues.array() - 0.5).abs().maxCoeff() < 1e-12);
  for (Index i = 0; i < f.boundaryPoints.size(); ++i)
  {
    CHECK(std::abs(std::abs(f.boundaryPoints(i)) - 0.5) < 1e-12);
  }
  // brute-force Rayleigh quotients stay in the disk
  Lcg64 rng(2);
  for (int t = 0; t < 200; ++t)
  {
    ComplexVector u(2);
    u << Complex(rng.symmetric(), rng.symmetric()), Complex(rng.symmetric(), rng.symmetric());
    CHECK(std::abs(u.dot(j * u) / u.squaredNorm()) <= 0.5 + 1e-14);
  }
}

TEST_CASE("fov properties on random matrices")
{
  Lcg64 rng(42);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Index n = 2 + (trial * 3) % 31;
    const ComplexMatrix q = randomComplex(n, rng);
    const ComplexMatrix gram = trial % 2 ? randomHpd(n, rng) : ComplexMatrix::Identity(n, n);
    const auto f = fieldOfValues(q, gram);
    CHECK(isConvexPolygon(f.boundaryPoints));

    const DiscreteSpace sp("h", gram);
    const ComplexMatrix qhat = sp.sqrtGram() * q * sp.invSqrtGram();
    const double bound = norm2(qhat);
    CHECK((f.boundaryPoints.array().abs() <= bound + 1e-8).all());

    const ComplexVector eig = generalEigen(q).eigenvalues;
    for (Index i = 0; i < n; ++i)
    {
      CHECK(insideConvexPolygon(f.boundaryPoints, eig(i)));
    }

    const auto transformed = fieldOfValues(qhat, ComplexMatrix::Identity(n, n));
    CHECK(hausdorffDistance(f.boundaryPoints, transformed.boundaryPoints) <= 1e-8);

    for (int a = 0; a < 4; ++a)
    {
      const double theta = 2.0 * std::numbers::pi * a / 4.0 + 0.1;
      CHECK(std::abs(supportFunction(qhat, theta) - choleskySupport(q, gram, theta)) <= 1e-10 * (1.0 + bound));
    }
  }
}

TEST_CASE("carleman diagnostics")
{
  ComplexMatrix k = ComplexMatrix::Zero(3, 3);
  k(0, 0) = 1.0;
  k(1, 1) = 0.5;
  k(2, 2) = 0.25;
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  auto d = carlemanDiagnostics(k, id, id, 2.0);
  CHECK(d.partialMeans(1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(d.carlemanNorm == doctest::Approx(std::sqrt(21.0) / 4.0).epsilon(1e-14));
  CHECK(d.carlemanNorm >= d.singularValues(0));

  d = carlemanDiagnostics(ComplexMatrix::Zero(3, 3), id, id, 2.0);
  CHECK(d.partialMeans.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.carlemanNorm == 0.0);

  auto [problem, prec] = fredholmSecondKind(32, 0.1, 50.0);
  const auto &mass = *problem.identityPart;
  d = carlemanDiagnostics(*problem.compactPart, mass, mass, 2.0);
  for (Index i = 1; i < d.partialMeans.size(); ++i)
  {
    CHECK(d.partialMeans(i) <= d.partialMeans(i - 1) + 1e-15);
    CHECK(std::sqrt(double(i + 1)) * d.partialMeans(i) <= d.carlemanNorm + 1e-8);
  }
  CHECK_THROWS_AS(carlemanDiagnostics(k, ComplexMatrix::Zero(3, 3), id, 2.0), NumericError);
}

TEST_CASE("spectral picture of the demo matrix")
{
  const auto pic = spectralPicture(randomDemo(40, 0.5, 8), 360);
  CHECK(pic.kappa2 > pic.kappaS);
  CHECK(pic.zeroInFov);
  CHECK(pic.fovDistance == 0.0);
  // a conjugation-symmetric set meets the real axis in [min Re, max Re]
  const RealVector re = pic.eigenvalues.real();
  CHECK(pic.zeroInSpectrumHull == (re.minCoeff() <= 0.0 && re.maxCoeff() >= 0.0));
}

TEST_CASE("polygon helpers")
{
  ComplexVector square(4);
  square << Complex(1, 1), Complex(-1, 1), Complex(-1, -1), Complex(1, -1);
  CHECK(isConvexPolygon(square));
  CHECK(insideConvexPolygon(square, 0.0));
  CHECK_FALSE(insideConvexPolygon(square, Complex(2, 0)));
  ComplexVector cloud(5);
  cloud << Complex(0, 0), Complex(1, 1), Complex(-1, 1), Complex(-1, -1), Complex(1, -1);
  CHECK(convexHull(cloud).size() == 4);
  CHECK(hausdorffDistance(square, square) == 0.0);
}
