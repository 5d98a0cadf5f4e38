// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "bpop/densela.hpp"

namespace bpop
{

struct MeshMeta
{
  double hMin = 0.0;
  double hMax = 0.0;
  double sobolevOrder = 0.0;
};

struct SynthesisConstants
{
  double gammaLambda = 0.0;
  double normLambda = 0.0;
  double kLambda = 0.0;
};

// A trial or test space: its Gram matrix H defines (u, v)_X = v^H H u.
// Copies share the cached square roots.
class DiscreteSpace
{
public:
  DiscreteSpace(std::string label, ComplexMatrix gram, std::optional<MeshMeta> meshMeta = std::nullopt,
                std::optional<double> sobolevOrder = std::nullopt);

  static DiscreteSpace euclidean(Index dim, std::string label = "euclid");

  const std::string &label() const { return data_->label; }
  Index dim() const { return data_->gram.rows(); }
  const ComplexMatrix &gram() const { return data_->gram; }
  const std::optional<MeshMeta> &meshMeta() const { return data_->meshMeta; }
  // Fourier-basis spaces report s here instead of mesh metadata.
  std::optional<double> sobolevOrder() const;

  const RealVector &gramEigenvalues() const { return data_->eigenvalues; }  // descending
  const ComplexMatrix &sqrtGram() const { return data_->sqrtGram; }
  const ComplexMatrix &invSqrtGram() const { return data_->invSqrtGram; }
  const ComplexMatrix &invGram() const { return data_->invGram; }

  // Same label, dimension and Gram.
  bool sameAs(const DiscreteSpace &other) const;

private:
  struct Data
  {
    std::string label;
    ComplexMatrix gram;
    std::optional<MeshMeta> meshMeta;
    std::optional<double> sobolevOrder;
    RealVector eigenvalues;
    ComplexMatrix sqrtGram;
    ComplexMatrix invSqrtGram;
    ComplexMatrix invGram;
  };
  std::shared_ptr<const Data> data_;
};

SynthesisConstants synthesisConstants(const DiscreteSpace &sp);
SynthesisConstants synthesisConstants(const ComplexMatrix &gram);

// sqrt(u^H H u)
double normX(const DiscreteSpace &sp, const ComplexVector &u);
double normH(const ComplexMatrix &gram, const ComplexVector &u);
// Dual norm ||H^{-1/2} b||_2 of a functional with coefficient vector b.
double dualNorm(const DiscreteSpace &sp, const ComplexVector &b);

void requireSameSpace(const DiscreteSpace &a, const DiscreteSpace &b, const char *where);

}  // namespace bpop
