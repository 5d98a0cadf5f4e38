// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bpop/opprec.hpp"
#include "bpop/random.hpp"

using namespace bpop;

namespace
{

PreconditionedSystem identitySystem(Index n, double scale = 1.0)
{
  const auto sp = DiscreteSpace::euclidean(n);
  const GalerkinOperator id(ComplexMatrix::Identity(n, n), sp, sp);
  const GalerkinOperator a(scale * ComplexMatrix::Identity(n, n), sp, sp);
  ProblemInstance problem{a, ComplexVector::Ones(n), Family::Custom, {}, {}, {}, {}, {}};
  return PreconditionedSystem(problem, PreconditionerSet(id, id, id, true));
}

ComplexVector randomVector(Index n, Lcg64 &rng)
{
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i)
  {
    v(i) = Complex(rng.symmetric(), rng.symmetric());
  }
  return v;
}

}  // namespace

TEST_CASE("identity chain")
{
  const auto sys = identitySystem(4);
  Lcg64 rng(1);
  const ComplexVector u = randomVector(4, rng);
  CHECK((applyPreconditioned(sys, u) - u).norm() < 1e-15);
  CHECK(applyPreconditioned(sys, ComplexVector::Zero(4)).norm() == 0.0);
  const auto k = conditionConstants(sys);
  CHECK(k.kStar == doctest::Approx(1.0));
  CHECK(k.kappaS == doctest::Approx(1.0));
  CHECK(k.kappa2 == doctest::Approx(1.0));
  const auto c = coercivityConstants(sys);
  CHECK(c.vH == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.vHinv == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(c.coercivityFailed);
}

TEST_CASE("scaled identity coercivity")
{
  const auto c = coercivityConstants(identitySystem(2, 0.25));
  CHECK(c.vH == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c.vHinv == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("bi-parametric factor")
{
  CHECK(muNuFactor(0.0, 0.0) == 1.0);
  CHECK(muNuFactor(1.0 / 3.0, 1.0 / 3.0) == doctest::Approx(4.0).epsilon(1e-15));
  auto [problem, prec] = circleFourier(8);
  const auto k0 = conditionConstants(PreconditionedSystem(problem, prec));
  CHECK(k0.kStarMuNu == k0.kStar);
  const auto k = conditionConstants(PreconditionedSystem(problem, prec, {1.0 / 3.0, 1.0 / 3.0}));
  CHECK(k.kStarMuNu == doctest::Approx(4.0 * k.kStar).epsilon(1e-14));
  CHECK_THROWS_AS(PreconditionedSystem(problem, prec, {1.0, 0.0}), NumericError);
}

TEST_CASE("circle chain is the symbol product")
{
  auto [problem, prec] = circleFourier(5);
  const PreconditionedSystem sys(problem, prec);
  Lcg64 rng(3);
  const ComplexVector u = randomVector(sys.dim(), rng);
  const ComplexVector q = applyPreconditioned(sys, u);
  const ComplexVector symbol = prec.c().matrix().diagonal().cwiseProduct(problem.op.matrix().diagonal());
  CHECK((q - symbol.cwiseProduct(u)).norm() < 1e-14 * u.norm());
}

TEST_CASE("condition bounds and chain agreement")
{
  Lcg64 rng(5);
  std::vector<std::pair<ProblemInstance, PreconditionerSet>> instances;
  instances.push_back(circleFourier(16));
  instances.push_back(fredholmSecondKind(24, 0.1, 100.0));
  for (auto &[problem, prec] : instances)
  {
    for (double mu : {0.0, 0.4, 0.9})
    {
      for (double nu : {0.0, 0.5, 0.9})
      {
        const PreconditionedSystem sys(problem, prec, {mu, nu});
        const auto k = conditionConstants(sys);
        CHECK(k.kA >= 1.0);
        CHECK(k.kStar >= 1.0);
        CHECK(k.kStarMuNu >= k.kStar);
        CHECK(k.kappa2 >= k.kappaS * (1.0 - 1e-12));
        CHECK(k.kappaS <= k.kStarMuNu + 1e-8);
        CHECK(k.kappa2 <= k.kStarMuNu * k.kLambda * k.kLambda + 1e-8);
        if (mu == 0.0 && nu == 0.0)
        {
          CHECK(k.kappaS <= k.kStar + 1e-8);
        }
        const ComplexMatrix pa = sys.explicitProduct();
        for (int i = 0; i < 20; ++i)
        {
          const ComplexVector u = randomVector(sys.dim(), rng);
          const ComplexVector want = pa * u;
          CHECK((applyPreconditioned(sys, u) - want).norm() <= 1e-10 * want.norm());
        }
      }
    }
  }
}

TEST_CASE("circle coercivity lower bounds")
{
  auto [problem, prec] = circleFourier(12);
  const PreconditionedSystem sys(problem, prec);
  const auto c = coercivityConstants(sys);
  CHECK_FALSE(c.coercivityFailed);
  const double low = prec.c().gamma() * problem.op.gamma() / (prec.m().contNorm() * prec.n().contNorm());
  const double lowInv = prec.m().gamma() * prec.n().gamma() / (prec.c().contNorm() * problem.op.contNorm());
  CHECK(c.vH >= low - 1e-8);
  CHECK(c.vHinv >= lowInv - 1e-8);
}

TEST_CASE("pinv gram of the Bubnov-Galerkin set")
{
  auto [problem, prec] = circleFourier(4);
  REQUIRE(prec.pinvGram());
  const ComplexMatrix expected = prec.n().matrix() * inverse(prec.c().matrix()) * prec.m().matrix();
  CHECK((*prec.pinvGram() - expected).norm() < 1e-13 * expected.norm());
  const PreconditionedSystem sys(problem, prec);
  CHECK((weightGram(sys, WeightKind::Pinv) - expected).norm() < 1e-13 * expected.norm());
  CHECK(weightGram(sys, WeightKind::Euclid) == ComplexMatrix::Identity(sys.dim(), sys.dim()));
}
