// SPDX-License-Identifier: Apache-2.0
#include "bpop/spaces.hpp"

#include <cmath>

namespace bpop
{

DiscreteSpace::DiscreteSpace(std::string label, ComplexMatrix gram, std::optional<MeshMeta> meshMeta,
                             std::optional<double> sobolevOrder)
{
  if (gram.rows() != gram.cols())
  {
    throw NumericError(ErrorCode::NonSquare, "DiscreteSpace '" + label + "': Gram is not square");
  }
  if (!isHermitian(gram))
  {
    throw NumericError(ErrorCode::NotPositiveDefinite, "DiscreteSpace '" + label + "': Gram is not Hermitian");
  }
  auto eig = hermitianEigen(gram, true);
  if (gram.rows() > 0 && !(eig.eigenvalues.minCoeff() > 0.0))
  {
    throw NumericError(ErrorCode::NotPositiveDefinite,
                       "DiscreteSpace '" + label + "': Gram has a non-positive eigenvalue");
  }
  auto data = std::make_shared<Data>();
  data->label = std::move(label);
  data->meshMeta = meshMeta;
  data->sobolevOrder = sobolevOrder;
  const ComplexMatrix &q = *eig.eigenvectors;
  const RealVector root = eig.eigenvalues.array().sqrt();
  data->sqrtGram = q * root.asDiagonal() * q.adjoint();
  data->invSqrtGram = q * root.cwiseInverse().asDiagonal() * q.adjoint();
  data->invGram = q * eig.eigenvalues.cwiseInverse().asDiagonal() * q.adjoint();
  data->eigenvalues = std::move(eig.eigenvalues);
  data->gram = std::move(gram);
  data_ = std::move(data);
}

DiscreteSpace DiscreteSpace::euclidean(Index dim, std::string label)
{
  return DiscreteSpace(std::move(label), ComplexMatrix::Identity(dim, dim));
}

std::optional<double> DiscreteSpace::sobolevOrder() const
{
  if (data_->sobolevOrder)
  {
    return data_->sobolevOrder;
  }
  if (data_->meshMeta)
  {
    return data_->meshMeta->sobolevOrder;
  }
  return std::nullopt;
}

bool DiscreteSpace::sameAs(const DiscreteSpace &other) const
{
  if (data_ == other.data_)
  {
    return true;
  }
  return label() == other.label() && dim() == other.dim() && gram() == other.gram();
}

SynthesisConstants synthesisConstants(const DiscreteSpace &sp)
{
  const RealVector &ev = sp.gramEigenvalues();
  SynthesisConstants c;
  c.gammaLambda = std::sqrt(ev(ev.size() - 1));
  c.normLambda = std::sqrt(ev(0));
  c.kLambda = c.normLambda / c.gammaLambda;
  return c;
}

SynthesisConstants synthesisConstants(const ComplexMatrix &gram)
{
  return synthesisConstants(DiscreteSpace("gram", gram));
}

double normH(const ComplexMatrix &gram, const ComplexVector &u)
{
  if (gram.rows() != u.size())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "normX: vector length differs from space dimension");
  }
  return std::sqrt(std::max(0.0, u.dot(gram * u).real()));
}

double normX(const DiscreteSpace &sp, const ComplexVector &u)
{
  return normH(sp.gram(), u);
}

double dualNorm(const DiscreteSpace &sp, const ComplexVector &b)
{
  if (sp.dim() != b.size())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "dualNorm: vector length differs from space dimension");
  }
  return (sp.invSqrtGram() * b).norm();
}

void requireSameSpace(const DiscreteSpace &a, const DiscreteSpace &b, const char *where)
{
  if (!a.sameAs(b))
  {
    throw NumericError(ErrorCode::SpaceMismatch,
                       std::string(where) + ": spaces '" + a.label() + "' and '" + b.label() + "' differ");
  }
}

}  // namespace bpop
