// SPDX-License-Identifier: Apache-2.0
#include "bpop/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bpop/random.hpp"

namespace bpop
{

std::string modeName(PerturbationMode mode)
{
  switch (mode)
  {
    case PerturbationMode::DenseRandom: return "denseRandom";
    case PerturbationMode::SvdTruncation: return "svdTruncation";
    case PerturbationMode::EntryDrop: return "entryDrop";
  }
  return "denseRandom";
}

PerturbationMode parseMode(const std::string &name)
{
  for (auto m : {PerturbationMode::DenseRandom, PerturbationMode::SvdTruncation, PerturbationMode::EntryDrop})
  {
    if (modeName(m) == name)
    {
      return m;
    }
  }
  throw NumericError(ErrorCode::InvalidArgument, "unknown perturbation mode '" + name + "'");
}

void validate(const PerturbationSpec &spec)
{
  if (!(spec.level >= 0.0 && spec.level < 1.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "perturbation level must lie in [0,1)");
  }
}

namespace
{

ComplexMatrix randomComplex(Index rows, Index cols, std::uint64_t seed)
{
  Lcg64 rng(seed);
  ComplexMatrix e(rows, cols);
  for (Index i = 0; i < rows; ++i)
  {
    for (Index j = 0; j < cols; ++j)
    {
      const double re = rng.symmetric();
      const double im = rng.symmetric();
      e(i, j) = Complex(re, im);
    }
  }
  return e;
}

double normalizedGap(const GalerkinOperator &op, const ComplexMatrix &diff)
{
  return norm2(op.rangeDual().invSqrtGram() * diff * op.domain().invSqrtGram()) / op.gamma();
}

PerturbedOperator denseRandom(const GalerkinOperator &op, const PerturbationSpec &spec)
{
  ComplexMatrix e = randomComplex(op.matrix().rows(), op.matrix().cols(), spec.seed);
  if (op.domain().sameAs(op.rangeDual()) && isHermitian(op.matrix()))
  {
    e = ((e + e.adjoint()) / 2.0).eval();
  }
  e *= spec.level * op.gamma() / norm2(e);
  const ComplexMatrix diff = op.rangeDual().sqrtGram() * e * op.domain().sqrtGram();
  GalerkinOperator perturbed = op.withMatrix(op.matrix() - diff);
  return {perturbed, measurePerturbation(op, perturbed), false};
}

PerturbedOperator svdTruncation(const GalerkinOperator &op, const PerturbationSpec &spec)
{
  const auto dec = svd(op.normalized(), true);
  const RealVector &s = dec.singularValues;
  const Index n = s.size();
  // Rank r keeps sigma_1..sigma_r; the induced level is sigma_{r+1} / gamma.
  Index rank = -1;
  for (Index r = n - 1; r >= 0; --r)
  {
    if (s(r) / op.gamma() <= spec.level)
    {
      rank = r;
    }
    else
    {
      break;
    }
  }
  if (rank < 0)
  {
    return {op, PerturbationMeasure{0.0}, true};
  }
  const ComplexMatrix &u = *dec.u;
  const ComplexMatrix &v = *dec.v;
  const ComplexMatrix truncated =
      u.leftCols(rank) * s.head(rank).cast<Complex>().asDiagonal() * v.leftCols(rank).adjoint();
  GalerkinOperator perturbed =
      op.withMatrix(op.rangeDual().sqrtGram() * truncated * op.domain().sqrtGram());
  return {perturbed, measurePerturbation(op, perturbed), false};
}

PerturbedOperator entryDrop(const GalerkinOperator &op, const PerturbationSpec &spec)
{
  const ComplexMatrix &a = op.matrix();
  std::vector<Index> order(static_cast<std::size_t>(a.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return std::abs(a.data()[x]) < std::abs(a.data()[y]); });

  auto dropped = [&](std::size_t count) {
    ComplexMatrix diff = ComplexMatrix::Zero(a.rows(), a.cols());
    for (std::size_t i = 0; i < count; ++i)
    {
      diff.data()[order[i]] = a.data()[order[i]];
    }
    return diff;
  };

  std::size_t lo = 0, hi = order.size();
  for (int step = 0; step < config::entryDropBisectionSteps && lo < hi; ++step)
  {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (normalizedGap(op, dropped(mid)) <= spec.level)
    {
      lo = mid;
    }
    else
    {
      hi = mid - 1;
    }
  }
  // The gap need not be monotone in the count; back off until admissible.
  while (lo > 0 && normalizedGap(op, dropped(lo)) > spec.level)
  {
    --lo;
  }
  GalerkinOperator perturbed = op.withMatrix(a - dropped(lo));
  return {perturbed, measurePerturbation(op, perturbed), false};
}

}  // namespace

PerturbedOperator perturbOperator(const GalerkinOperator &op, const PerturbationSpec &spec)
{
  validate(spec);
  if (spec.level == 0.0)
  {
    return {op, PerturbationMeasure{0.0}, false};
  }
  if (!(op.gamma() > 0.0))
  {
    throw NumericError(ErrorCode::Singular, "perturbOperator: operator has zero inf-sup constant");
  }
  switch (spec.mode)
  {
    case PerturbationMode::DenseRandom: return denseRandom(op, spec);
    case PerturbationMode::SvdTruncation: return svdTruncation(op, spec);
    case PerturbationMode::EntryDrop: return entryDrop(op, spec);
  }
  return {op, PerturbationMeasure{0.0}, false};
}

ComplexVector perturbRhs(const ComplexVector &b, const DiscreteSpace &rangeDual, double nu, std::uint64_t seed)
{
  if (!(nu >= 0.0 && nu < 1.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "rhs perturbation level must lie in [0,1)");
  }
  const double target = nu * dualNorm(rangeDual, b);
  if (target == 0.0)
  {
    return b;
  }
  ComplexVector e = randomComplex(b.size(), 1, seed);
  e *= target / dualNorm(rangeDual, e);
  return b + e;
}

PerturbationMeasure measurePerturbation(const GalerkinOperator &original, const GalerkinOperator &perturbed)
{
  requireSameSpace(original.domain(), perturbed.domain(), "measurePerturbation (domain)");
  requireSameSpace(original.rangeDual(), perturbed.rangeDual(), "measurePerturbation (range dual)");
  return {normalizedGap(original, original.matrix() - perturbed.matrix())};
}

double measureRhsPerturbation(const ComplexVector &b, const ComplexVector &bNu, const DiscreteSpace &rangeDual)
{
  const double base = dualNorm(rangeDual, b);
  const double gap = dualNorm(rangeDual, b - bNu);
  if (base == 0.0)
  {
    return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return gap / base;
}

}  // namespace bpop
