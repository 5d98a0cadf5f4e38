// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here and never derived from the run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bpop/bounds.hpp"
#include "bpop/fov.hpp"
#include "bpop/random.hpp"

using namespace bpop;

namespace
{

constexpr double kConditionTol = 1e-8;
constexpr double kStabilityTol = 1e-10;
constexpr double kOracleTol = 1e-10;
constexpr double kDiskTol = 1e-6;
constexpr double kRuntimeLimitSeconds = 60.0;
constexpr double kGrowthMin = 8.0;
constexpr double kVariationMax = 0.05;
constexpr double kOrderTol = 0.25;

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string &what)
  {
    if (!ok)
    {
      pass = false;
      failures += " [fail: " + what + "]";
    }
  }
};

using Reports = std::vector<BoundReport>;

const BoundReport *find(const Reports &reports, const std::string &id)
{
  for (const auto &r : reports)
  {
    if (r.boundId == id)
    {
      return &r;
    }
  }
  return nullptr;
}

bool satisfied(const Reports &reports, const std::string &id)
{
  const BoundReport *r = find(reports, id);
  return r && r->status == BoundStatus::Satisfied;
}

SolveConfig solver(std::optional<int> restart)
{
  SolveConfig cfg;
  cfg.restart = restart;
  cfg.tol = 1e-10;
  cfg.maxIter = 200;
  return cfg;
}

double seconds(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Every minimal.* report from the GMRES runs of the suite.
Reports crossNorm;

void collectCrossNorm(const Reports &reports)
{
  for (const auto &r : reports)
  {
    if (r.boundId.rfind("minimal.", 0) == 0)
    {
      crossNorm.push_back(r);
    }
  }
}

Outcome conditionSuite()
{
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> kappaS, kappaA;
  for (int modes : {8, 16, 32, 64, 128})
  {
    auto [problem, prec] = circleFourier(modes);
    const PreconditionedSystem sys(problem, prec);
    const auto k = conditionConstants(sys);
    const Reports r = checkConditionBounds(sys, k);
    o.require(k.kappaS <= k.kStar + kConditionTol, "kappa_S <= K_star at K=" + std::to_string(modes));
    o.require(k.kappa2 <= k.kStar * k.kLambda * k.kLambda + kConditionTol,
              "kappa_2 <= K_star K_Lambda^2 at K=" + std::to_string(modes));
    o.require(satisfied(r, "op-pg.kappa-s") && satisfied(r, "op-pg.kappa-2"), "reports");
    kappaS.push_back(k.kappaS);
    kappaA.push_back(conditionNumber2(problem.op.matrix()));
  }
  const double elapsed = seconds(start);
  const double growth = kappaA.back() / kappaA.front();
  const auto [lo, hi] = std::minmax_element(kappaS.begin(), kappaS.end());
  const double variation = *hi / *lo - 1.0;
  o.require(elapsed < kRuntimeLimitSeconds, "runtime");
  o.require(growth >= kGrowthMin, "kappa_2(A) growth");
  o.require(variation < kVariationMax, "kappa_S variation");
  o.detail << "kappa_2(A) growth " << growth << ", kappa_S variation " << variation << ", " << elapsed << " s";
  return o;
}

Outcome biParametricGrid()
{
  Outcome o;
  SweepConfig cfg;
  cfg.sizes = {32};
  cfg.mus.clear();
  for (int i = 0; i < 10; ++i)
  {
    cfg.mus.push_back(i / 10.0);
  }
  cfg.nus = cfg.mus;
  cfg.check = SolverCheck::None;
  cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const SweepResult result = sweep(cfg);
  int checked = 0, violations = 0, errors = 0;
  for (const auto &p : result.points)
  {
    errors += !p.error.empty();
    for (const auto &r : p.reports)
    {
      if (r.boundId.rfind("bi-parametric.", 0) == 0)
      {
        ++checked;
        violations += r.status == BoundStatus::Violated;
      }
    }
  }
  const double factor = muNuFactor(1.0 / 3.0, 1.0 / 3.0);
  o.require(result.points.size() == 100 && errors == 0, "grid incomplete");
  o.require(checked == 200 && violations == 0, "bi-parametric violations");
  o.require(std::abs(factor - 4.0) <= 1e-12, "factor at 1/3");
  o.detail << checked << " reports, " << violations << " violations, factor(1/3,1/3) = " << std::fixed
           << std::setprecision(3) << factor;
  return o;
}

Outcome perturbationStability()
{
  Outcome o;
  Lcg64 rng(20240601);
  const PerturbationMode modes[] = {PerturbationMode::DenseRandom, PerturbationMode::EntryDrop};
  double worstInfSup = 1e300, worstCont = 1e300;
  for (int trial = 0; trial < 50; ++trial)
  {
    const double nu = 0.99 * rng.uniform();
    const std::uint64_t seed = rng.next();
    auto [problem, prec] = trial % 2 == 0 ? circleFourier(4 + trial % 13)
                                          : fredholmSecondKind(8 + trial % 17, 0.05 + 0.01 * (trial % 5), 300.0);
    const GalerkinOperator &a = problem.op;
    const auto p = perturbOperator(a, {nu, modes[trial % 3 == 2], seed});
    worstInfSup = std::min(worstInfSup, p.op.gamma() - (a.gamma() * (1.0 - nu) - kStabilityTol));
    worstCont = std::min(worstCont, a.contNorm() + nu * a.gamma() + kStabilityTol - p.op.contNorm());
  }
  o.require(worstInfSup >= 0.0, "inf-sup");
  o.require(worstCont >= 0.0, "continuity");
  o.detail << "worst margins " << worstInfSup << " (inf-sup), " << worstCont << " (continuity)";
  return o;
}

Outcome gmresLinear()
{
  Outcome o;
  auto [problem, prec] = circleFourier(32);
  const PreconditionedSystem sys(problem, prec);
  const Reports r = checkGmresLinear(sys, solver(10));
  collectCrossNorm(r);
  o.require(satisfied(r, "gmres.fov-one-step"), "one-step FoV bound");
  o.require(satisfied(r, "gmres.linear-weighted"), "K_star rate bound");
  if (const auto *w = find(r, "gmres.linear-weighted"))
  {
    o.detail << w->measured.size() << " steps, margin " << w->margin;
  }
  const Reports pinv = checkGmresLinear(sys, solver(10), WeightKind::Pinv);
  collectCrossNorm(pinv);
  return o;
}

Outcome superLinear()
{
  Outcome o;
  auto [problem, prec] = fredholmSecondKind(64, 0.05, 300.0);
  const Reports r = checkGmresSuperlinear(PreconditionedSystem(problem, prec), solver(std::nullopt));
  collectCrossNorm(r);
  o.require(satisfied(r, "gmres.superlinear"), "partial-mean bound");
  o.require(satisfied(r, "carleman.partial-mean-tail"), "p=2 tail");
  const BoundReport *s = find(r, "gmres.superlinear");
  if (s && s->measured.size() >= 20)
  {
    const double t5 = s->measured[4], t20 = s->measured[19];
    o.require(t20 < t5, "Theta_20 < Theta_5");
    o.detail << "Theta_5 " << t5 << ", Theta_20 " << t20;
  }
  else
  {
    o.require(false, "fewer than 20 iterations");
  }
  const Reports b = checkGmresSuperlinear(PreconditionedSystem(problem, prec, {0.3, 0.1}), solver(std::nullopt));
  collectCrossNorm(b);
  o.require(satisfied(b, "gmres.superlinear"), "bi-parametric partial-mean bound");
  return o;
}

Outcome cgElliptic()
{
  Outcome o;
  auto [problem, prec] = circleFourier(32);
  SolveConfig cfg = solver(std::nullopt);
  cfg.method = Method::Cg;
  const Reports r = checkCgElliptic(PreconditionedSystem(problem, prec), cfg);
  o.require(satisfied(r, "cg.linear"), "CG linear bound");
  if (const auto *c = find(r, "cg.linear"))
  {
    o.detail << c->measured.size() << " steps, margin " << c->margin;
  }
  return o;
}

Outcome figureTwo()
{
  Outcome o;
  int inBand = 0, kappaOrder = 0, zeroInFov = 0, zeroOutsideHull = 0;
  std::ostringstream values;
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
  {
    const SpectralPicture pic = spectralPicture(randomDemo(40, 0.5, seed));
    kappaOrder += pic.kappa2 > pic.kappaS;
    zeroInFov += pic.zeroInFov;
    zeroOutsideHull += !pic.zeroInSpectrumHull;
    inBand += pic.kappaS >= 10.0 && pic.kappaS <= 100.0;
    values << (seed > 1 ? " " : "") << std::setprecision(4) << pic.kappaS;
  }
  o.require(kappaOrder == 10, "kappa_2 > kappa_S");
  o.require(zeroInFov == 10, "0 in F_2");
  o.require(zeroOutsideHull == 10, "0 outside spectral hull");
  o.require(inBand == 10, "kappa_S in [10,100]");
  o.detail << "kappa_2>kappa_S " << kappaOrder << "/10, 0 in F_2 " << zeroInFov << "/10, 0 outside hull "
           << zeroOutsideHull << "/10, kappa_S in band " << inBand << "/10 (kappa_S: " << values.str() << ")";
  return o;
}

Outcome strang()
{
  Outcome o;
  const std::vector<int> levels{4, 8, 16, 32, 64};
  const StrangStudy zero = strangStudy(Family::Circle, levels, {});
  o.require(satisfied(zero.reports, "strang.cea"), "Cea at nu = 0");

  NuRule rate;
  rate.kind = NuRule::Kind::Rate;
  const StrangStudy rated = strangStudy(Family::Circle, levels, rate);
  o.require(std::abs(rated.order - rated.unperturbedOrder) <= kOrderTol, "order under the rate rule");

  NuRule fixed;
  fixed.kind = NuRule::Kind::Fixed;
  fixed.value = 0.5;
  const StrangStudy half = strangStudy(Family::Circle, levels, fixed);
  o.require(satisfied(half.reports, "strang.inf-form") && satisfied(half.reports, "strang.full-form"),
            "Strang bound at nu = 0.5");
  o.detail << "order " << rated.order << " vs " << rated.unperturbedOrder;
  return o;
}

Outcome crossNormCheck()
{
  Outcome o;
  int bad = 0;
  for (const auto &r : crossNorm)
  {
    bad += r.status != BoundStatus::Satisfied;
  }
  o.require(!crossNorm.empty() && bad == 0, "minimal residual inequalities");
  o.detail << crossNorm.size() << " reports over all GMRES runs";
  return o;
}

Outcome oracles()
{
  Outcome o;
  const Complex i(0.0, 1.0);
  auto m2 = [](Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
  };
  auto close = [&](double got, double want) { return std::abs(got - want) <= kOracleTol; };

  auto h = hermitianEigen(m2(1, 0, 0, 4)).eigenvalues;
  o.require(close(h(0), 4) && close(h(1), 1), "hermitianEigen diag(1,4)");
  h = hermitianEigen(m2(2, 1, 1, 2)).eigenvalues;
  o.require(close(h(0), 3) && close(h(1), 1), "hermitianEigen [[2,1],[1,2]]");
  ComplexMatrix d3 = ComplexMatrix::Zero(3, 3);
  d3(0, 0) = 1.0;
  d3(1, 1) = 2.0;
  d3(2, 2) = 3.0;
  h = hermitianEigen(d3).eigenvalues;
  o.require(close(h(0), 3) && close(h(1), 2) && close(h(2), 1), "hermitianEigen diag(1,2,3)");

  auto s = svd(m2(3, 0, 0, 1)).singularValues;
  o.require(close(s(0), 3) && close(s(1), 1), "svd diag(3,1)");
  s = svd(m2(0, 2, 1, 0)).singularValues;
  o.require(close(s(0), 2) && close(s(1), 1), "svd [[0,2],[1,0]]");

  auto e = generalEigen(m2(2, 0, 0, i)).eigenvalues;
  o.require(std::abs(e(0) - 2.0) <= kOracleTol && std::abs(e(1) - i) <= kOracleTol, "generalEigen diag(2,i)");
  e = generalEigen(m2(3, -2, 1, 0)).eigenvalues;
  o.require(std::abs(e(0) - 2.0) <= kOracleTol && std::abs(e(1) - 1.0) <= kOracleTol, "generalEigen companion");
  e = generalEigen(m2(0, 1, 0, 0)).eigenvalues;
  o.require(e.cwiseAbs().maxCoeff() <= kOracleTol, "generalEigen Jordan block");

  const FovSample fov = fieldOfValues(m2(0, 1, 0, 0), ComplexMatrix::Identity(2, 2));
  double worst = 0.0;
  for (Index k = 0; k < fov.angles.size(); ++k)
  {
    worst = std::max(worst, std::abs(fov.supportValues(k) - 0.5));
    worst = std::max(worst, std::abs(fov.boundaryPoints(k) - std::polar(0.5, fov.angles(k))));
  }
  o.require(worst <= kDiskTol && fov.containsZero, "Jordan block disk");
  o.detail << "disk deviation " << worst << " over " << fov.angles.size() << " angles";
  return o;
}

}  // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char *name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "condition bounds and h-independence", conditionSuite},
      {2, "bi-parametric grid", biParametricGrid},
      {3, "perturbation stability", perturbationStability},
      {4, "GMRES(10) linear bounds", gmresLinear},
      {5, "super-linear bounds", superLinear},
      {6, "CG elliptic bound", cgElliptic},
      {7, "random non-normal picture", figureTwo},
      {8, "Strang study", strang},
      {9, "cross-norm residual inequalities", crossNormCheck},
      {10, "kernel oracles", oracles},
  };
  int failed = 0;
  for (const auto &c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &ex)
    {
      o.pass = false;
      o.detail << "exception: " << ex.what();
    }
    failed += !o.pass;
    std::printf("criterion %d: %s - %s: %s%s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.str().c_str(), o.failures.c_str(), seconds(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
