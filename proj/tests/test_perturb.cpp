// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bpop/perturb.hpp"
#include "bpop/random.hpp"

using namespace bpop;

namespace
{

GalerkinOperator identityOp(Index n, double scale = 1.0)
{
  const auto sp = DiscreteSpace::euclidean(n);
  return GalerkinOperator(scale * ComplexMatrix::Identity(n, n), sp, sp);
}

GalerkinOperator diagOp(std::initializer_list<double> d)
{
  RealVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d)
  {
    v(i++) = x;
  }
  const auto sp = DiscreteSpace::euclidean(v.size());
  return GalerkinOperator(v.cast<Complex>().asDiagonal(), sp, sp);
}

}  // namespace

TEST_CASE("zero level returns the operator unchanged")
{
  auto [problem, prec] = circleFourier(6);
  for (auto mode : {PerturbationMode::DenseRandom, PerturbationMode::SvdTruncation, PerturbationMode::EntryDrop})
  {
    const auto p = perturbOperator(problem.op, {0.0, mode, 4});
    CHECK(p.op.matrix() == problem.op.matrix());
    CHECK(p.measure.nuActual == 0.0);
  }
  CHECK_THROWS_AS(perturbOperator(problem.op, {1.0, PerturbationMode::DenseRandom, 1}), NumericError);
  CHECK_THROWS_AS(perturbOperator(problem.op, {-0.1, PerturbationMode::DenseRandom, 1}), NumericError);
}

TEST_CASE("dense random rescaling is exact")
{
  const auto a = identityOp(5);
  const auto p = perturbOperator(a, {0.3, PerturbationMode::DenseRandom, 2});
  CHECK(std::abs(norm2((a.matrix() - p.op.matrix()).eval()) - 0.3) < 1e-12);
  CHECK(std::abs(p.measure.nuActual - 0.3) < 1e-12);
}

TEST_CASE("svd truncation infeasible below level one")
{
  const auto a = diagOp({1, 2, 4});
  const auto p = perturbOperator(a, {0.3, PerturbationMode::SvdTruncation, 1});
  CHECK(p.truncationInfeasible);
  CHECK(p.op.matrix() == a.matrix());
}

TEST_CASE("entry drop stays within budget")
{
  auto [problem, prec] = fredholmSecondKind(12, 0.2, 40.0);
  const auto p = perturbOperator(problem.op, {0.2, PerturbationMode::EntryDrop, 1});
  CHECK(p.measure.nuActual <= 0.2 + 1e-10);
  CHECK(p.measure.nuActual > 0.0);
  CHECK(p.op.matrix() != problem.op.matrix());
}

TEST_CASE("measurePerturbation examples")
{
  const auto a = identityOp(3);
  CHECK(measurePerturbation(a, a).nuActual == 0.0);
  CHECK(measurePerturbation(a, identityOp(3, 0.75)).nuActual == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(measurePerturbation(diagOp({2, 2}), diagOp({2, 1})).nuActual == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(measurePerturbation(a, identityOp(4)), NumericError);
}

TEST_CASE("rhs perturbation")
{
  const auto sp = DiscreteSpace::euclidean(2);
  ComplexVector b(2);
  b << 1, 0;
  CHECK(perturbRhs(b, sp, 0.0, 3) == b);
  CHECK(std::abs((b - perturbRhs(b, sp, 0.5, 3)).norm() - 0.5) < 1e-12);
  CHECK(perturbRhs(ComplexVector::Zero(2), sp, 0.5, 3).norm() == 0.0);

  auto [problem, prec] = circleFourier(5);
  const ComplexVector bnu = perturbRhs(problem.rhs, problem.op.rangeDual(), 0.4, 8);
  CHECK(measureRhsPerturbation(problem.rhs, bnu, problem.op.rangeDual()) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("stability of perturbed operators over random constructions")
{
  Lcg64 rng(2024);
  for (int trial = 0; trial < 50; ++trial)
  {
    const double nu = 0.95 * rng.uniform();
    const std::uint64_t seed = rng.next();
    const bool circle = trial % 2 == 0;
    auto [problem, prec] = circle ? circleFourier(3 + trial % 7) : fredholmSecondKind(6 + trial % 9, 0.3, 20.0);
    const auto &a = problem.op;
    const auto mode = trial % 3 == 2 ? PerturbationMode::EntryDrop : PerturbationMode::DenseRandom;
    const auto p = perturbOperator(a, {nu, mode, seed});
    CHECK(p.op.gamma() >= a.gamma() * (1.0 - nu) - 1e-10);
    CHECK(p.op.contNorm() <= a.contNorm() + nu * a.gamma() + 1e-10);
    CHECK(measurePerturbation(a, p.op).nuActual <= nu + 1e-10);
    // deterministic in (seed, mode, level)
    CHECK(perturbOperator(a, {nu, mode, seed}).op.matrix() == p.op.matrix());
  }
}

TEST_CASE("hermitian operators stay hermitian under dense random")
{
  auto [problem, prec] = circleFourier(8);
  const auto p = perturbOperator(problem.op, {0.5, PerturbationMode::DenseRandom, 1});
  CHECK(isHermitian(p.op.matrix()));
}
