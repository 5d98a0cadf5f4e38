// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <ostream>

#include "bpop/bounds.hpp"
#include "bpop/io.hpp"

namespace bpop
{

namespace
{

// min over s in [0,1] of c1 sqrt((1-s)^2 a^2 + best^2) + c2 s a. Any w_h
// splits into a multiple of the projection plus an orthogonal part that
// only increases both terms, so this is the infimum over X_h.
double infOverSubspace(double c1, double c2, double a, double best)
{
  auto f = [&](double s) { return c1 * std::hypot((1.0 - s) * a, best) + c2 * s * a; };
  double value = std::min(f(0.0), f(1.0));
  const double rho = c2 / c1;
  if (a > 0.0 && rho < 1.0)
  {
    const double t = rho * best / std::sqrt(1.0 - rho * rho);
    const double s = std::clamp(1.0 - t / a, 0.0, 1.0);
    value = std::min(value, f(s));
  }
  return value;
}

}  // namespace

double NuRule::evaluate(double h, double unperturbedOrder) const
{
  switch (kind)
  {
    case Kind::Zero: return 0.0;
    case Kind::Fixed: return value;
    case Kind::Rate: return std::min(constant * std::pow(h, rate.value_or(unperturbedOrder)), cap);
  }
  return 0.0;
}

std::string NuRule::describe() const
{
  switch (kind)
  {
    case Kind::Zero: return "zero";
    case Kind::Fixed: return "fixed:" + io::formatDouble(value);
    case Kind::Rate:
      return "rate:" + io::formatDouble(constant) + "*h^" + (rate ? io::formatDouble(*rate) : std::string("order"));
  }
  return "zero";
}

double fittedOrder(const std::vector<double> &h, const std::vector<double> &error)
{
  if (h.size() != error.size())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "fittedOrder: h and error differ in length");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    if (h[i] > 0.0 && error[i] > 0.0)
    {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(error[i]));
    }
  }
  if (x.size() < 2)
  {
    throw NumericError(ErrorCode::InvalidArgument, "fittedOrder: need two positive samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "fittedOrder: h values must differ");
  }
  return sxy / sxx;
}

StrangStudy strangStudy(Family family, const std::vector<int> &refinements, const NuRule &rule, std::uint64_t seed,
                        PerturbationMode mode)
{
  if (family != Family::Circle)
  {
    throw NumericError(ErrorCode::MissingExactSolution,
                       "strangStudy: family '" + familyName(family) + "' has no analytic solution");
  }
  if (refinements.size() < 2)
  {
    throw NumericError(ErrorCode::InvalidArgument, "strangStudy: at least two refinement levels required");
  }
  int finest = 0;
  for (int k : refinements)
  {
    if (k < 1)
    {
      throw NumericError(ErrorCode::InvalidArgument, "strangStudy: refinement levels must be >= 1");
    }
    finest = std::max(finest, k);
  }
  if (rule.kind == NuRule::Kind::Fixed && !(rule.value >= 0.0 && rule.value < 1.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "nu must lie in [0,1)");
  }

  const double c0 = 0.5;
  const CircleContinuumConstants cc = circleContinuumConstants(c0);
  StrangStudy study;
  study.gammaA = cc.gammaA;
  study.kA = cc.normA / cc.gammaA;
  study.referenceModes = 8 * finest;
  study.rule = rule;
  const ComplexVector reference = circleExactCoefficients(study.referenceModes, c0);
  auto weight = [](int k) { return std::sqrt(1.0 + static_cast<double>(k) * k); };

  // X-norm of reference - embedded(u), with u given on |k| <= modes.
  auto errorOf = [&](int modes, const ComplexVector &u) {
    double s = 0.0;
    for (int k = -study.referenceModes; k <= study.referenceModes; ++k)
    {
      Complex e = reference(circleModeIndex(study.referenceModes, k));
      if (std::abs(k) <= modes)
      {
        e -= u(circleModeIndex(modes, k));
      }
      s += weight(k) * std::norm(e);
    }
    return std::sqrt(s);
  };

  std::vector<double> hs, errs0;
  for (int modes : refinements)
  {
    auto [problem, prec] = circleFourier(modes, 0.5, c0);
    StrangLevel lv;
    lv.modes = modes;
    lv.n = problem.op.dim();
    lv.h = 2.0 * std::numbers::pi / static_cast<double>(2 * modes + 1);
    const ComplexVector u0 = solveLinear(problem.op.matrix(), problem.rhs);
    lv.errorUnperturbed = errorOf(modes, u0);

    ComplexVector proj(lv.n);
    for (int k = -modes; k <= modes; ++k)
    {
      proj(circleModeIndex(modes, k)) = reference(circleModeIndex(study.referenceModes, k));
    }
    lv.bestApprox = errorOf(modes, proj);
    lv.projectionNorm = normX(problem.op.domain(), proj);
    lv.rhsDualNorm = dualNorm(problem.op.rangeDual(), problem.rhs);
    lv.cea = (1.0 + study.kA) * lv.bestApprox;
    hs.push_back(lv.h);
    errs0.push_back(lv.errorUnperturbed);
    study.levels.push_back(lv);
  }
  study.unperturbedOrder = fittedOrder(hs, errs0);

  std::vector<double> errs;
  for (auto &lv : study.levels)
  {
    lv.nu = rule.evaluate(lv.h, study.unperturbedOrder);
    auto [problem, prec] = circleFourier(lv.modes, 0.5, c0);
    const auto a = perturbOperator(problem.op, {lv.nu, mode, seed});
    const ComplexVector b = perturbRhs(problem.rhs, problem.op.rangeDual(), lv.nu, seed + 2);
    lv.errorX = errorOf(lv.modes, solveLinear(a.op.matrix(), b));
    errs.push_back(lv.errorX);

    const double nu = lv.nu;
    const double c1 = 1.0 + study.kA / (1.0 - nu);
    const double c2 = nu / (1.0 - nu);
    const double rhsTerm = nu / (study.gammaA * (1.0 - nu)) * lv.rhsDualNorm;
    lv.strangInf = infOverSubspace(c1, c2, lv.projectionNorm, lv.bestApprox) + rhsTerm;
    lv.strangFull = (1.0 + study.kA) * c1 * lv.bestApprox + 2.0 * rhsTerm;
  }
  study.order = fittedOrder(hs, errs);

  BoundContext ctx{familyName(family), 0, 0.0, 0.0, "direct"};
  auto perLevel = [&](auto field) {
    std::vector<double> v;
    for (const auto &lv : study.levels)
    {
      v.push_back(lv.*field);
    }
    return v;
  };
  const auto rel = ToleranceKind::Relative;
  const double tol = 1e-10;
  ctx.n = study.levels.back().n;
  ctx.nu = study.levels.back().nu;
  auto &out = study.reports;
  out.push_back(makeReport("strang.cea", ctx, perLevel(&StrangLevel::errorUnperturbed), perLevel(&StrangLevel::cea),
                           rel, tol));
  std::vector<double> later(errs0.begin() + 1, errs0.end()), earlier(errs0.begin(), errs0.end() - 1);
  out.push_back(makeReport("strang.monotone", ctx, later, earlier, rel, tol));
  out.push_back(makeReport("strang.inf-form", ctx, perLevel(&StrangLevel::errorX), perLevel(&StrangLevel::strangInf),
                           rel, tol));
  out.push_back(makeReport("strang.full-form", ctx, perLevel(&StrangLevel::errorX),
                           perLevel(&StrangLevel::strangFull), rel, tol));
  if (rule.kind == NuRule::Kind::Rate)
  {
    out.push_back(makeReport("strang.order", ctx, {std::abs(study.order - study.unperturbedOrder)},
                             {config::strangOrderTol}, ToleranceKind::Absolute, 0.0));
    out.back().note = "order " + io::formatDouble(study.order) + " vs unperturbed " + io::formatDouble(study.unperturbedOrder);
  }
  return study;
}

nlohmann::json toJson(const StrangStudy &study)
{
  nlohmann::json levels = nlohmann::json::array();
  for (const auto &lv : study.levels)
  {
    levels.push_back({{"modes", lv.modes},
                      {"N", lv.n},
                      {"h", lv.h},
                      {"nu", lv.nu},
                      {"errorX", lv.errorX},
                      {"errorUnperturbed", lv.errorUnperturbed},
                      {"bestApprox", lv.bestApprox},
                      {"projectionNorm", lv.projectionNorm},
                      {"rhsDualNorm", lv.rhsDualNorm},
                      {"strangInf", lv.strangInf},
                      {"strangFull", lv.strangFull},
                      {"cea", lv.cea}});
  }
  nlohmann::json reports = nlohmann::json::array();
  for (const auto &r : study.reports)
  {
    reports.push_back(toJson(r));
  }
  return {{"levels", levels},
          {"order", study.order},
          {"unperturbedOrder", study.unperturbedOrder},
          {"gammaA", study.gammaA},
          {"kA", study.kA},
          {"referenceModes", study.referenceModes},
          {"nuRule", study.rule.describe()},
          {"reports", reports}};
}

void writeStrangCsv(std::ostream &os, const StrangStudy &study)
{
  os << "modes,N,h,nu,errorX,errorUnperturbed,bestApprox,strangInf,strangFull,cea\n";
  for (const auto &lv : study.levels)
  {
    os << lv.modes << ',' << lv.n << ',' << io::formatDouble(lv.h) << ',' << io::formatDouble(lv.nu) << ','
       << io::formatDouble(lv.errorX) << ',' << io::formatDouble(lv.errorUnperturbed) << ',' << io::formatDouble(lv.bestApprox)
       << ',' << io::formatDouble(lv.strangInf) << ',' << io::formatDouble(lv.strangFull) << ',' << io::formatDouble(lv.cea)
       << '\n';
  }
}

}  // namespace bpop
