// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "bpop/perturb.hpp"

namespace bpop
{

struct BiParametric
{
  double mu = 0.0;                  // level for C
  double nu = 0.0;                  // level for A
  std::optional<double> nuRhs;      // level for b; defaults to nu
  PerturbationMode mode = PerturbationMode::DenseRandom;
  std::uint64_t seed = 1;           // A uses seed, C seed + 1, b seed + 2

  double rhsLevel() const { return nuRhs.value_or(nu); }
};

// P_mu A_nu u = P_mu b_nu together with the unperturbed data the bounds
// refer to. P is applied as the chain N v = A u, w = C v, M q = w.
class PreconditionedSystem
{
public:
  PreconditionedSystem(ProblemInstance base, PreconditionerSet basePrec, BiParametric params = {});

  const ProblemInstance &base() const { return base_; }
  const PreconditionerSet &basePrec() const { return basePrec_; }
  const GalerkinOperator &aNu() const { return aNu_; }
  const GalerkinOperator &cMu() const { return cMu_; }
  const ComplexVector &bNu() const { return bNu_; }
  const BiParametric &params() const { return params_; }
  double mu() const { return params_.mu; }
  double nu() const { return params_.nu; }
  Index dim() const { return aNu_.dim(); }

  const PerturbationMeasure &aMeasure() const { return aMeasure_; }
  const PerturbationMeasure &cMeasure() const { return cMeasure_; }
  double rhsMeasure() const { return rhsMeasure_; }
  bool truncationInfeasible() const { return truncationInfeasible_; }

  const DiscreteSpace &trialSpace() const { return base_.op.domain(); }

  // q = M^{-1} C_mu N^{-1} y
  ComplexVector applyPreconditioner(const ComplexVector &y) const;
  // P_mu b_nu
  ComplexVector preconditionedRhs() const { return applyPreconditioner(bNu_); }
  // Explicit P_mu A_nu, for diagnostics only.
  ComplexMatrix explicitProduct() const;
  // Explicit P_mu.
  ComplexMatrix explicitPreconditioner() const;

  friend ComplexVector applyPreconditioned(const PreconditionedSystem &sys, const ComplexVector &u);

private:
  ProblemInstance base_;
  PreconditionerSet basePrec_;
  BiParametric params_;
  GalerkinOperator aNu_;
  GalerkinOperator cMu_;
  ComplexVector bNu_;
  PerturbationMeasure aMeasure_;
  PerturbationMeasure cMeasure_;
  double rhsMeasure_ = 0.0;
  bool truncationInfeasible_ = false;
  std::shared_ptr<const LuSolver<Complex>> mLu_;
  std::shared_ptr<const LuSolver<Complex>> nLu_;
};

// q = M^{-1} C_mu N^{-1} A_nu u via two solves and two products.
ComplexVector applyPreconditioned(const PreconditionedSystem &sys, const ComplexVector &u);

struct ConditionConstants
{
  double kA = 0.0;          // ||a|| / gamma_A (unperturbed)
  double kStar = 0.0;       // ||m|| ||n|| ||c|| ||a|| / (gamma_M gamma_N gamma_C gamma_A)
  double kStarMuNu = 0.0;   // kStar (1+mu)/(1-mu) (1+nu)/(1-nu)
  double kLambda = 0.0;     // synthesis constant of X_h
  double kappaS = 0.0;      // |lambda|_max / |lambda|_min of P_mu A_nu
  double kappa2 = 0.0;      // Euclidean sigma_1 / sigma_N of P_mu A_nu
  double kappaX = 0.0;      // the same in the X_h geometry
  double muNuFactor = 1.0;  // kStarMuNu / kStar
  // Constants of the perturbed operators, measured.
  double gammaAnu = 0.0;
  double normAnu = 0.0;
  double gammaCmu = 0.0;
  double normCmu = 0.0;
};

double muNuFactor(double mu, double nu);

ConditionConstants conditionConstants(const PreconditionedSystem &sys);

struct CoercivityConstants
{
  double vH = 0.0;
  double vHinv = 0.0;
  bool coercivityFailed = false;  // either FoV contains the origin
};

enum class WeightKind
{
  XGram,
  Pinv,
  Euclid
};

std::string weightName(WeightKind kind);
WeightKind parseWeight(const std::string &name);

// The inner-product Gram for a weighted solve; Pinv requires the
// Bubnov-Galerkin specialization.
ComplexMatrix weightGram(const PreconditionedSystem &sys, WeightKind kind);

// V_H(P_mu A_nu) and V_H((P_mu A_nu)^{-1}) in the given geometry (X_h Gram
// by default). The inverse is formed explicitly.
CoercivityConstants coercivityConstants(const PreconditionedSystem &sys);
CoercivityConstants coercivityConstants(const PreconditionedSystem &sys, const ComplexMatrix &gram);

nlohmann::json describe(const ConditionConstants &c);
nlohmann::json describe(const CoercivityConstants &c);

}  // namespace bpop
