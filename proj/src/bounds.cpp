// SPDX-License-Identifier: Apache-2.0
#include "bpop/bounds.hpp"

#include <cmath>
#include <limits>

#include "bpop/fov.hpp"
#include "bpop/io.hpp"

namespace bpop
{

namespace
{

double toleranceFor(ToleranceKind kind, double tol, double bound)
{
  return kind == ToleranceKind::Absolute ? tol : tol * std::abs(bound);
}

// Rates Theta_k for k = 1..iterations.
std::vector<double> ratesFrom(const std::vector<double> &rates)
{
  return rates.size() > 1 ? std::vector<double>(rates.begin() + 1, rates.end()) : std::vector<double>{};
}

std::vector<double> perStep(std::size_t count, const std::function<double(int)> &f)
{
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
  {
    out[i] = f(static_cast<int>(i) + 1);
  }
  return out;
}

bool isZeroLevel(const PreconditionedSystem &sys)
{
  return sys.mu() == 0.0 && sys.nu() == 0.0;
}

// The assumption lower bounds in the X_h geometry, from constants of the
// perturbed operators.
struct AssumptionBounds
{
  double lowH = 0.0;
  double lowHinv = 0.0;
};

AssumptionBounds assumptionBounds(const PreconditionedSystem &sys)
{
  const PreconditionerSet &p = sys.basePrec();
  AssumptionBounds b;
  b.lowH = sys.cMu().gamma() * sys.aNu().gamma() / (p.m().contNorm() * p.n().contNorm());
  b.lowHinv = p.m().gamma() * p.n().gamma() / (sys.cMu().contNorm() * sys.aNu().contNorm());
  return b;
}

bool assumptionHolds(const CoercivityConstants &c, const AssumptionBounds &b)
{
  return !c.coercivityFailed && c.vH >= b.lowH - config::coercivityTol &&
         c.vHinv >= b.lowHinv - config::coercivityTol;
}

std::vector<BoundReport> assumptionReports(const PreconditionedSystem &sys, const CoercivityConstants &c,
                                           const AssumptionBounds &b)
{
  const BoundContext ctx = contextOf(sys);
  std::vector<BoundReport> out;
  out.push_back(makeReport("assumption.coercivity-x", ctx, {c.vH}, {b.lowH}, ToleranceKind::Absolute,
                           config::coercivityTol, BoundSense::Lower));
  out.push_back(makeReport("assumption.coercivity-x-inverse", ctx, {c.vHinv}, {b.lowHinv},
                           ToleranceKind::Absolute, config::coercivityTol, BoundSense::Lower));
  for (auto &r : out)
  {
    if (r.status == BoundStatus::Violated)
    {
      // An assumption, not a claim: a miss only switches off the bounds
      // that rely on it.
      r.status = BoundStatus::NotApplicable;
      r.note = "assumption not met for this instance";
    }
  }
  return out;
}

BoundReport gated(BoundReport r, bool holds, const char *why)
{
  if (!holds && r.status != BoundStatus::Satisfied)
  {
    r.status = BoundStatus::NotApplicable;
    r.note = why;
  }
  else if (!holds)
  {
    r.note = std::string(why) + "; bound holds regardless";
  }
  return r;
}

std::vector<double> partialMeans(const RealVector &values)
{
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (Index k = 0; k < values.size(); ++k)
  {
    sum += values(k);
    out[k] = sum / static_cast<double>(k + 1);
  }
  return out;
}

double meanAt(const std::vector<double> &means, int k)
{
  if (means.empty())
  {
    return 0.0;
  }
  return means[std::min<std::size_t>(static_cast<std::size_t>(k), means.size()) - 1];
}

// K_mu,nu = C_mu N^{-1} A_nu - M scaled to the X_h -> X_h' operator norm.
ComplexMatrix normalizedCompactPart(const PreconditionedSystem &sys)
{
  const PreconditionerSet &p = sys.basePrec();
  const ComplexMatrix k =
      sys.cMu().matrix() * LuSolver<Complex>(p.n().matrix()).solve(sys.aNu().matrix()) - p.m().matrix();
  return p.m().rangeDual().invSqrtGram() * k * sys.trialSpace().invSqrtGram();
}

// ||m|| ||n|| / (gamma_C gamma_A gamma_M (1-mu)(1-nu)), bounding ||(P_mu A_nu)^{-1}|| / gamma_M.
double superlinearFactor(const PreconditionedSystem &sys)
{
  const PreconditionerSet &p = sys.basePrec();
  return p.m().contNorm() * p.n().contNorm() /
         (p.c().gamma() * sys.base().op.gamma() * p.m().gamma() * (1.0 - sys.mu()) * (1.0 - sys.nu()));
}

}  // namespace

std::string statusName(BoundStatus status)
{
  switch (status)
  {
    case BoundStatus::Satisfied: return "satisfied";
    case BoundStatus::Violated: return "violated";
    case BoundStatus::NotApplicable: return "not_applicable";
  }
  return "violated";
}

BoundReport makeReport(std::string boundId, BoundContext context, std::vector<double> measured,
                       std::vector<double> bound, ToleranceKind kind, double tol, BoundSense sense)
{
  if (measured.size() != bound.size())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "makeReport: measured and bound differ in length");
  }
  BoundReport r;
  r.boundId = std::move(boundId);
  r.context = std::move(context);
  r.sense = sense;
  if (measured.empty())
  {
    r.status = BoundStatus::NotApplicable;
    r.note = "no measurements";
  }
  double margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i < measured.size(); ++i)
  {
    const double gap = sense == BoundSense::Upper ? bound[i] - measured[i] : measured[i] - bound[i];
    margin = std::min(margin, std::isnan(gap) ? -std::numeric_limits<double>::infinity() : gap);
    ok = ok && gap >= -toleranceFor(kind, tol, bound[i]);
  }
  r.measured = std::move(measured);
  r.bound = std::move(bound);
  r.margin = r.measured.empty() ? 0.0 : margin;
  r.satisfied = ok;
  if (!r.measured.empty())
  {
    r.status = ok ? BoundStatus::Satisfied : BoundStatus::Violated;
  }
  return r;
}

BoundReport notApplicable(std::string boundId, BoundContext context, std::string reason)
{
  BoundReport r;
  r.boundId = std::move(boundId);
  r.context = std::move(context);
  r.status = BoundStatus::NotApplicable;
  r.note = std::move(reason);
  return r;
}

BoundContext contextOf(const PreconditionedSystem &sys, std::string solver)
{
  return {familyName(sys.base().family), sys.dim(), sys.mu(), sys.nu(), std::move(solver)};
}

std::vector<BoundReport> checkConditionBounds(const PreconditionedSystem &sys)
{
  return checkConditionBounds(sys, conditionConstants(sys));
}

std::vector<BoundReport> checkConditionBounds(const PreconditionedSystem &sys, const ConditionConstants &k)
{
  const BoundContext ctx = contextOf(sys);
  const double l2 = k.kLambda * k.kLambda;
  const auto abs = ToleranceKind::Absolute;
  const double tol = config::conditionBoundTol;
  std::vector<BoundReport> out;
  if (isZeroLevel(sys))
  {
    out.push_back(makeReport("op-pg.kappa-s", ctx, {k.kappaS}, {k.kStar}, abs, tol));
    out.push_back(makeReport("op-pg.kappa-2", ctx, {k.kappa2}, {k.kStar * l2}, abs, tol));
  }
  out.push_back(makeReport("bi-parametric.kappa-s", ctx, {k.kappaS}, {k.kStarMuNu}, abs, tol));
  out.push_back(makeReport("bi-parametric.kappa-2", ctx, {k.kappa2}, {k.kStarMuNu * l2}, abs, tol));
  return out;
}

std::vector<BoundReport> checkPerturbationBounds(const PreconditionedSystem &sys)
{
  const BoundContext ctx = contextOf(sys);
  const auto abs = ToleranceKind::Absolute;
  const double tol = 1e-10;
  const GalerkinOperator &a = sys.base().op;
  const GalerkinOperator &c = sys.basePrec().c();
  const double nu = sys.nu();
  const double mu = sys.mu();
  std::vector<BoundReport> out;
  out.push_back(makeReport("perturbation.inf-sup-a", ctx, {sys.aNu().gamma()}, {a.gamma() * (1.0 - nu)}, abs,
                           tol, BoundSense::Lower));
  out.push_back(makeReport("perturbation.continuity-a", ctx, {sys.aNu().contNorm()},
                           {a.contNorm() + nu * a.gamma()}, abs, tol));
  out.push_back(makeReport("perturbation.inf-sup-c", ctx, {sys.cMu().gamma()}, {c.gamma() * (1.0 - mu)}, abs,
                           tol, BoundSense::Lower));
  out.push_back(makeReport("perturbation.continuity-c", ctx, {sys.cMu().contNorm()},
                           {c.contNorm() + mu * c.gamma()}, abs, tol));
  out.push_back(makeReport("perturbation.level-a", ctx, {sys.aMeasure().nuActual}, {nu}, abs, tol));
  out.push_back(makeReport("perturbation.level-c", ctx, {sys.cMeasure().nuActual}, {mu}, abs, tol));
  out.push_back(makeReport("perturbation.level-b", ctx, {sys.rhsMeasure()}, {sys.params().rhsLevel()}, abs, tol));
  if (sys.truncationInfeasible())
  {
    for (auto &r : out)
    {
      r.note = "svd truncation infeasible at this level; operator left unperturbed";
    }
  }
  return out;
}

std::vector<BoundReport> checkCoercivityAssumption(const PreconditionedSystem &sys)
{
  return assumptionReports(sys, coercivityConstants(sys), assumptionBounds(sys));
}

std::vector<BoundReport> crossNormReports(const ResidualHistory &euclid, const ResidualHistory &weighted,
                                          const ComplexMatrix &gram, const BoundContext &context)
{
  const CrossCheckReport cc = residualCrossCheck(euclid, weighted, gram);
  std::vector<double> ee, ew, ww, we;
  for (const auto &s : cc.steps)
  {
    ee.push_back(s.euclidOfEuclid);
    ew.push_back(s.euclidOfWeighted);
    ww.push_back(s.weightedOfWeighted);
    we.push_back(s.weightedOfEuclid);
  }
  const double tolE = config::crossCheckTol * (ee.empty() ? 0.0 : ee[0]);
  const double tolH = config::crossCheckTol * (ww.empty() ? 0.0 : ww[0]);
  std::vector<BoundReport> out;
  out.push_back(makeReport("minimal.euclid", context, ee, ew, ToleranceKind::Absolute, tolE));
  out.push_back(makeReport("minimal.weighted", context, ww, we, ToleranceKind::Absolute, tolH));
  return out;
}

std::vector<BoundReport> checkGmresLinear(const PreconditionedSystem &sys, const SolveConfig &cfg,
                                          WeightKind weight)
{
  SolveConfig cw = cfg;
  cw.method = Method::WeightedGmres;
  SolveConfig ce = cfg;
  ce.method = Method::Gmres;
  ce.weightGram.reset();
  const BoundContext ctxW = contextOf(sys, methodName(cw.method) + ":" + weightName(weight));
  const BoundContext ctxE = contextOf(sys, methodName(ce.method));

  std::vector<BoundReport> out;
  ComplexMatrix gram;
  try
  {
    gram = weightGram(sys, weight);
  }
  catch (const NumericError &e)
  {
    if (e.code() != ErrorCode::NotHpd)
    {
      throw;
    }
    out.push_back(notApplicable("gmres.fov-one-step", ctxW, e.what()));
    return out;
  }
  cw.weightGram = gram;

  // Every constant is measured before either solve.
  const ConditionConstants k = conditionConstants(sys);
  const CoercivityConstants cH = coercivityConstants(sys, gram);
  const CoercivityConstants cX = weight == WeightKind::XGram ? cH : coercivityConstants(sys);
  const AssumptionBounds ab = assumptionBounds(sys);
  const bool holdsX = assumptionHolds(cX, ab);
  const double kStarRate = std::sqrt(std::max(0.0, 1.0 - 1.0 / k.kStarMuNu));

  const auto runW = gmresSolve(sys, cw);
  const auto runE = gmresSolve(sys, ce);
  const ResidualHistory &hw = runW.history;
  const std::size_t steps = hw.norms.size() - 1;

  if (cH.coercivityFailed)
  {
    out.push_back(notApplicable("gmres.fov-one-step", ctxW, "field of values contains the origin"));
  }
  else
  {
    const double q = std::max(0.0, 1.0 - cH.vH * cH.vHinv);
    std::vector<double> ratio(steps);
    for (std::size_t i = 0; i < steps; ++i)
    {
      ratio[i] = hw.norms[0] > 0.0 ? hw.norms[i + 1] / hw.norms[0] : 0.0;
    }
    out.push_back(makeReport("gmres.fov-one-step", ctxW, ratio,
                             perStep(steps, [&](int j) { return std::pow(q, 0.5 * j); }), ToleranceKind::Absolute,
                             config::residualRatioTol));
  }

  const std::vector<double> thetaW = ratesFrom(hw.rates);
  const std::vector<double> thetaE = ratesFrom(runE.history.rates);
  if (weight == WeightKind::XGram)
  {
    out.push_back(gated(makeReport("gmres.linear-weighted", ctxW, thetaW, std::vector<double>(thetaW.size(), kStarRate),
                                   ToleranceKind::Relative, config::rateBoundTol),
                        holdsX, "X_h-coercivity assumption not met"));
  }
  if (weight == WeightKind::Pinv)
  {
    const GalerkinOperator &a = sys.base().op;
    const PreconditionerSet &p = sys.basePrec();
    std::optional<CoercivityReport> ca, cc;
    if (a.domain().sameAs(a.rangeDual()) && p.c().domain().sameAs(p.c().rangeDual()))
    {
      ca = coercivityCheck(a);
      cc = coercivityCheck(p.c());
    }
    if (!isZeroLevel(sys))
    {
      out.push_back(notApplicable("gmres.linear-pinv", ctxW, "stated for the unperturbed system only"));
    }
    else if (!ca || !cc || !ca->elliptic || !cc->elliptic)
    {
      out.push_back(notApplicable("gmres.linear-pinv", ctxW, "needs A coercive and C elliptic"));
    }
    else
    {
      // V(PA) >= alpha_C alpha_A / ||m||^2 and V((PA)^{-1}) >= gamma_M^2 alpha_A / (||c|| ||a||^2).
      const double lowP = cc->vH * ca->vH / (p.m().contNorm() * p.m().contNorm());
      const double lowPinv = p.m().gamma() * p.m().gamma() * ca->vH / (p.c().contNorm() * a.contNorm() * a.contNorm());
      const double rate = std::sqrt(std::max(0.0, 1.0 - lowP * lowPinv));
      out.push_back(makeReport("gmres.linear-pinv", ctxW, thetaW, std::vector<double>(thetaW.size(), rate),
                               ToleranceKind::Relative, config::rateBoundTol));
      out.back().note = "alpha_A = " + io::formatDouble(ca->vH) + ", alpha_C = " + io::formatDouble(cc->vH);
    }
  }
  out.push_back(gated(makeReport("gmres.linear-euclid", ctxE, thetaE,
                                 std::vector<double>(thetaE.size(), k.kLambda * kStarRate), ToleranceKind::Relative,
                                 config::rateBoundTol),
                      holdsX, "X_h-coercivity assumption not met"));

  auto cross = crossNormReports(runE.history, hw, gram, ctxW);
  out.insert(out.end(), cross.begin(), cross.end());
  return out;
}

std::vector<BoundReport> checkGmresSuperlinear(const PreconditionedSystem &sys, const SolveConfig &cfg)
{
  if (!sys.base().compactPart)
  {
    throw NumericError(ErrorCode::MissingCompactPart, "checkGmresSuperlinear: problem carries no compact part");
  }
  const double p = sys.base().carlemanIndex.value_or(2.0);
  const ComplexMatrix gram = sys.trialSpace().gram();

  const RealVector sigma = svd(normalizedCompactPart(sys)).singularValues;
  const std::vector<double> means = partialMeans(sigma);
  const double carleman =
      p > 0.0 ? std::pow(sigma.array().pow(p).sum(), 1.0 / p) : (sigma.size() ? sigma(0) : 0.0);
  const double b = superlinearFactor(sys);
  const double kLambda = synthesisConstants(sys.trialSpace()).kLambda;
  auto tail = [&](int k) { return carleman * (p > 0.0 ? std::pow(static_cast<double>(k), -1.0 / p) : 1.0); };

  SolveConfig cw = cfg;
  cw.method = Method::WeightedGmres;
  cw.restart.reset();
  cw.weightGram = gram;
  SolveConfig ce = cw;
  ce.method = Method::Gmres;
  ce.weightGram.reset();
  const BoundContext ctxW = contextOf(sys, methodName(cw.method) + ":x-gram");
  const BoundContext ctxE = contextOf(sys, methodName(ce.method));

  const auto runW = gmresSolve(sys, cw);
  const auto runE = gmresSolve(sys, ce);
  const std::vector<double> thetaW = ratesFrom(runW.history.rates);
  const std::vector<double> thetaE = ratesFrom(runE.history.rates);
  const auto rel = ToleranceKind::Relative;
  const double tol = config::rateBoundTol;

  std::vector<BoundReport> out;
  out.push_back(makeReport("gmres.superlinear", ctxW, thetaW,
                           perStep(thetaW.size(), [&](int k) { return b * meanAt(means, k); }), rel, tol));
  out.push_back(makeReport("gmres.superlinear-tail", ctxW, thetaW,
                           perStep(thetaW.size(), [&](int k) { return b * tail(k); }), rel, tol));
  out.push_back(makeReport("gmres.superlinear-euclid", ctxE, thetaE,
                           perStep(thetaE.size(), [&](int k) { return kLambda * b * meanAt(means, k); }), rel, tol));
  out.push_back(makeReport("carleman.partial-mean-tail", ctxW, means, perStep(means.size(), tail), rel, tol));
  out.back().note = "p = " + io::formatDouble(p) + ", |||K|||_p = " + io::formatDouble(carleman);

  auto cross = crossNormReports(runE.history, runW.history, gram, ctxW);
  out.insert(out.end(), cross.begin(), cross.end());
  return out;
}

std::vector<BoundReport> checkCgElliptic(const PreconditionedSystem &sys, const SolveConfig &cfg)
{
  if (!sys.basePrec().bubnovGalerkin())
  {
    throw NumericError(ErrorCode::NotHpd, "checkCgElliptic: needs the Bubnov-Galerkin configuration");
  }
  const ComplexMatrix &a = sys.aNu().matrix();
  if (!isHermitian(a, 1e-10) || !(hermitianEigen(a, false).eigenvalues.minCoeff() > 0.0))
  {
    throw NumericError(ErrorCode::NotHpd, "checkCgElliptic: A_nu is not Hermitian positive definite");
  }
  const BoundContext ctx = contextOf(sys, "cg");
  const ConditionConstants k = conditionConstants(sys);
  const double q = 1.0 - 2.0 / (std::sqrt(k.kStarMuNu) + 1.0);
  std::vector<double> eigMeans;
  if (sys.base().compactPart)
  {
    const auto eig = generalEigen(normalizedCompactPart(sys));
    eigMeans = partialMeans(eig.eigenvalues.cwiseAbs());
  }
  const double b = superlinearFactor(sys);

  const auto run = cgSolve(sys, cfg);
  const std::vector<double> theta = ratesFrom(run.history.rates);
  std::vector<BoundReport> out;
  out.push_back(makeReport("cg.linear", ctx, theta,
                           perStep(theta.size(), [&](int j) { return std::pow(2.0, 1.0 / j) * q; }),
                           ToleranceKind::Relative, config::rateBoundTol));
  if (!eigMeans.empty())
  {
    out.push_back(makeReport("cg.superlinear", ctx, theta,
                             perStep(theta.size(), [&](int j) { return 2.0 * b * meanAt(eigMeans, j); }),
                             ToleranceKind::Relative, config::rateBoundTol));
  }
  return out;
}

int countViolations(const std::vector<BoundReport> &reports)
{
  int n = 0;
  for (const auto &r : reports)
  {
    n += r.status == BoundStatus::Violated ? 1 : 0;
  }
  return n;
}

nlohmann::json toJson(const BoundReport &r)
{
  nlohmann::json ctx = {{"family", r.context.family}, {"N", r.context.n}, {"mu", r.context.mu},
                        {"nu", r.context.nu}};
  if (!r.context.solver.empty())
  {
    ctx["solver"] = r.context.solver;
  }
  nlohmann::json j = {{"boundId", r.boundId},
                      {"context", ctx},
                      {"measured", r.measured},
                      {"bound", r.bound},
                      {"sense", r.sense == BoundSense::Upper ? "upper" : "lower"},
                      {"satisfied", r.satisfied},
                      {"margin", r.margin},
                      {"status", statusName(r.status)}};
  if (!r.note.empty())
  {
    j["note"] = r.note;
  }
  return j;
}

}  // namespace bpop
