// SPDX-License-Identifier: Apache-2.0
#include "bpop/opprec.hpp"

#include <cmath>

#include "bpop/fov.hpp"

namespace bpop
{

namespace
{

void requireLevel(double value, const char *name)
{
  if (!(value >= 0.0 && value < 1.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, std::string(name) + " must lie in [0,1)");
  }
}

}  // namespace

PreconditionedSystem::PreconditionedSystem(ProblemInstance base, PreconditionerSet basePrec, BiParametric params)
  : base_(std::move(base)),
    basePrec_(std::move(basePrec)),
    params_(params),
    aNu_(base_.op),
    cMu_(basePrec_.c())
{
  requireLevel(params_.mu, "mu");
  requireLevel(params_.nu, "nu");
  requireLevel(params_.rhsLevel(), "nu-rhs");
  basePrec_.requireCompatible(base_.op);
  if (base_.rhs.size() != base_.op.dim())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "PreconditionedSystem: rhs length differs from operator size");
  }

  auto a = perturbOperator(base_.op, {params_.nu, params_.mode, params_.seed});
  auto c = perturbOperator(basePrec_.c(), {params_.mu, params_.mode, params_.seed + 1});
  aNu_ = a.op;
  aMeasure_ = a.measure;
  cMu_ = c.op;
  cMeasure_ = c.measure;
  truncationInfeasible_ = a.truncationInfeasible || c.truncationInfeasible;
  bNu_ = perturbRhs(base_.rhs, base_.op.rangeDual(), params_.rhsLevel(), params_.seed + 2);
  rhsMeasure_ = measureRhsPerturbation(base_.rhs, bNu_, base_.op.rangeDual());

  mLu_ = std::make_shared<const LuSolver<Complex>>(basePrec_.m().matrix());
  nLu_ = std::make_shared<const LuSolver<Complex>>(basePrec_.n().matrix());
}

ComplexVector PreconditionedSystem::applyPreconditioner(const ComplexVector &y) const
{
  if (y.size() != dim())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "applyPreconditioner: vector length differs from system size");
  }
  const ComplexVector v = nLu_->solve(y);
  const ComplexVector w = cMu_.matrix() * v;
  return mLu_->solve(w);
}

ComplexVector applyPreconditioned(const PreconditionedSystem &sys, const ComplexVector &u)
{
  if (u.size() != sys.dim())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "applyPreconditioned: vector length differs from system size");
  }
  return sys.applyPreconditioner(sys.aNu_.matrix() * u);
}

ComplexMatrix PreconditionedSystem::explicitProduct() const
{
  return mLu_->solve(cMu_.matrix() * nLu_->solve(aNu_.matrix()));
}

ComplexMatrix PreconditionedSystem::explicitPreconditioner() const
{
  return mLu_->solve(cMu_.matrix() * nLu_->inverse());
}

double muNuFactor(double mu, double nu)
{
  return ((1.0 + mu) / (1.0 - mu)) * ((1.0 + nu) / (1.0 - nu));
}

ConditionConstants conditionConstants(const PreconditionedSystem &sys)
{
  const GalerkinOperator &a = sys.base().op;
  const PreconditionerSet &p = sys.basePrec();
  ConditionConstants k;
  k.kA = a.kA();
  k.kStar = (p.m().contNorm() * p.n().contNorm() * p.c().contNorm() * a.contNorm()) /
            (p.m().gamma() * p.n().gamma() * p.c().gamma() * a.gamma());
  k.muNuFactor = muNuFactor(sys.mu(), sys.nu());
  k.kStarMuNu = k.kStar * k.muNuFactor;
  k.kLambda = synthesisConstants(sys.trialSpace()).kLambda;

  const ComplexMatrix pa = sys.explicitProduct();
  const auto eig = generalEigen(pa);
  if (!eig.converged)
  {
    throw NumericError(ErrorCode::NoConvergence, "conditionConstants: eigenvalue iteration cap reached");
  }
  const double lmin = std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1));
  if (!(lmin > 0.0))
  {
    throw NumericError(ErrorCode::Singular, "conditionConstants: P A has a zero eigenvalue");
  }
  k.kappaS = std::abs(eig.eigenvalues(0)) / lmin;
  k.kappa2 = conditionNumber2(pa);
  const DiscreteSpace &x = sys.trialSpace();
  k.kappaX = conditionNumber2(x.sqrtGram() * pa * x.invSqrtGram());

  k.gammaAnu = sys.aNu().gamma();
  k.normAnu = sys.aNu().contNorm();
  k.gammaCmu = sys.cMu().gamma();
  k.normCmu = sys.cMu().contNorm();
  return k;
}

std::string weightName(WeightKind kind)
{
  switch (kind)
  {
    case WeightKind::XGram: return "x-gram";
    case WeightKind::Pinv: return "pinv";
    case WeightKind::Euclid: return "euclid";
  }
  return "x-gram";
}

WeightKind parseWeight(const std::string &name)
{
  for (auto k : {WeightKind::XGram, WeightKind::Pinv, WeightKind::Euclid})
  {
    if (weightName(k) == name)
    {
      return k;
    }
  }
  throw NumericError(ErrorCode::InvalidArgument, "unknown weight '" + name + "'");
}

ComplexMatrix weightGram(const PreconditionedSystem &sys, WeightKind kind)
{
  switch (kind)
  {
    case WeightKind::XGram: return sys.trialSpace().gram();
    case WeightKind::Euclid: return ComplexMatrix::Identity(sys.dim(), sys.dim());
    case WeightKind::Pinv:
    {
      if (!sys.basePrec().bubnovGalerkin())
      {
        throw NumericError(ErrorCode::NotHpd, "weight 'pinv' needs the Bubnov-Galerkin preconditioner");
      }
      // P_mu^{-1} = N C_mu^{-1} M
      const PreconditionerSet &p = sys.basePrec();
      ComplexMatrix g = p.n().matrix() * LuSolver<Complex>(sys.cMu().matrix()).solve(p.m().matrix());
      if (!isHermitian(g, 1e-10))
      {
        throw NumericError(ErrorCode::NotHpd, "weight 'pinv': N C_mu^{-1} M is not Hermitian");
      }
      g = ((g + g.adjoint()) / 2.0).eval();
      if (!(hermitianEigen(g, false).eigenvalues.minCoeff() > 0.0))
      {
        throw NumericError(ErrorCode::NotHpd, "weight 'pinv': N C_mu^{-1} M is not positive definite");
      }
      return g;
    }
  }
  return sys.trialSpace().gram();
}

CoercivityConstants coercivityConstants(const PreconditionedSystem &sys, const ComplexMatrix &gram)
{
  const ComplexMatrix pa = sys.explicitProduct();
  CoercivityConstants c;
  c.vH = fieldOfValues(pa, gram).vH;
  c.vHinv = fieldOfValues(inverse(pa), gram).vH;
  c.coercivityFailed = !(c.vH > 0.0) || !(c.vHinv > 0.0);
  return c;
}

CoercivityConstants coercivityConstants(const PreconditionedSystem &sys)
{
  return coercivityConstants(sys, sys.trialSpace().gram());
}

nlohmann::json describe(const ConditionConstants &c)
{
  return {{"kA", c.kA},           {"kStar", c.kStar},         {"kStarMuNu", c.kStarMuNu},
          {"kLambda", c.kLambda}, {"kappaS", c.kappaS},       {"kappa2", c.kappa2},
          {"kappaX", c.kappaX},   {"muNuFactor", c.muNuFactor}, {"gammaAnu", c.gammaAnu},
          {"normAnu", c.normAnu}, {"gammaCmu", c.gammaCmu},   {"normCmu", c.normCmu}};
}

nlohmann::json describe(const CoercivityConstants &c)
{
  return {{"vH", c.vH}, {"vHinv", c.vHinv}, {"coercivityFailed", c.coercivityFailed}};
}

}  // namespace bpop
