// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpop/krylov.hpp"

namespace bpop
{

enum class BoundStatus
{
  Satisfied,
  Violated,
  NotApplicable
};

std::string statusName(BoundStatus status);

// Upper: measured <= bound + tol. Lower: measured >= bound - tol.
enum class BoundSense
{
  Upper,
  Lower
};

enum class ToleranceKind
{
  Absolute,
  Relative
};

struct BoundContext
{
  std::string family;
  Index n = 0;
  double mu = 0.0;
  double nu = 0.0;
  std::string solver;
};

struct BoundReport
{
  std::string boundId;
  BoundContext context;
  std::vector<double> measured;
  std::vector<double> bound;
  BoundSense sense = BoundSense::Upper;
  bool satisfied = true;
  double margin = 0.0;  // worst bound - measured (upper) or measured - bound (lower)
  BoundStatus status = BoundStatus::Satisfied;
  std::string note;
};

// Evaluates every entry pair; an empty measurement is not applicable.
BoundReport makeReport(std::string boundId, BoundContext context, std::vector<double> measured,
                       std::vector<double> bound, ToleranceKind kind, double tol,
                       BoundSense sense = BoundSense::Upper);
BoundReport notApplicable(std::string boundId, BoundContext context, std::string reason);

BoundContext contextOf(const PreconditionedSystem &sys, std::string solver = "");

// kappa_S, kappa_2 against K_star (unperturbed) and K_star,mu,nu.
std::vector<BoundReport> checkConditionBounds(const PreconditionedSystem &sys);
std::vector<BoundReport> checkConditionBounds(const PreconditionedSystem &sys, const ConditionConstants &k);

// Stability of A_nu and C_mu: inf-sup and continuity under perturbation,
// plus the realized perturbation levels.
std::vector<BoundReport> checkPerturbationBounds(const PreconditionedSystem &sys);

// X_h-coercivity lower bounds for P_mu A_nu and its inverse. For mu = nu = 0
// these are checked claims; otherwise a failed assumption is reported as
// not applicable.
std::vector<BoundReport> checkCoercivityAssumption(const PreconditionedSystem &sys);

// Weighted and Euclidean GMRES(m) against the one-step FoV bound and the
// K_star forms, plus the cross-norm inequalities of the two runs. The
// weighted run uses the Gram matrix of `weight`; cfg.weightGram is ignored.
std::vector<BoundReport> checkGmresLinear(const PreconditionedSystem &sys, const SolveConfig &cfg,
                                          WeightKind weight = WeightKind::XGram);

// Super-linear bounds through the partial means of the compact part
// K_mu,nu = C_mu N^{-1} A_nu - M. Runs full GMRES (restart ignored).
std::vector<BoundReport> checkGmresSuperlinear(const PreconditionedSystem &sys, const SolveConfig &cfg);

// CG in the Bubnov-Galerkin elliptic configuration.
std::vector<BoundReport> checkCgElliptic(const PreconditionedSystem &sys, const SolveConfig &cfg);

// Both inequalities of the minimal residual comparison as two reports.
std::vector<BoundReport> crossNormReports(const ResidualHistory &euclid, const ResidualHistory &weighted,
                                          const ComplexMatrix &gram, const BoundContext &context);

struct NuRule
{
  enum class Kind
  {
    Zero,
    Fixed,
    Rate
  };
  Kind kind = Kind::Zero;
  double value = 0.0;           // Fixed
  double constant = 1.0;        // Rate: nu = constant * h^rate
  std::optional<double> rate;   // Rate: defaults to the measured unperturbed order
  double cap = 0.9;

  double evaluate(double h, double unperturbedOrder) const;
  std::string describe() const;
};

struct StrangLevel
{
  int modes = 0;
  Index n = 0;
  double h = 0.0;
  double nu = 0.0;
  double errorX = 0.0;
  double errorUnperturbed = 0.0;
  double bestApprox = 0.0;
  double projectionNorm = 0.0;
  double rhsDualNorm = 0.0;
  double strangInf = 0.0;   // inf over w_h of the first line
  double strangFull = 0.0;  // (1+K_A)(1+K_A/(1-nu)) best + 2 nu ||b_h|| / (gamma_A (1-nu))
  double cea = 0.0;         // (1+K_A) best
};

struct StrangStudy
{
  std::vector<StrangLevel> levels;
  double order = 0.0;
  double unperturbedOrder = 0.0;
  double gammaA = 0.0;
  double kA = 0.0;
  int referenceModes = 0;
  NuRule rule;
  std::vector<BoundReport> reports;
};

// Circle family only: error of the perturbed Galerkin solution against the
// analytic coefficients truncated at 8x the finest level.
StrangStudy strangStudy(Family family, const std::vector<int> &refinements, const NuRule &rule,
                        std::uint64_t seed = 1, PerturbationMode mode = PerturbationMode::DenseRandom);

// Least-squares slope of log(error) against log(h).
double fittedOrder(const std::vector<double> &h, const std::vector<double> &error);

struct ProblemParams
{
  Family family = Family::Circle;
  int size = 32;  // modes K for circle, elements n for fredholm
  double radius = 0.5;
  double c0 = 0.5;
  double kernelWidth = 0.5;
  double kernelScale = 1.0;
};

std::pair<ProblemInstance, PreconditionerSet> makeProblem(const ProblemParams &params);

enum class SolverCheck
{
  None,
  GmresLinear,
  GmresSuperlinear,
  Cg
};

struct SweepConfig
{
  ProblemParams problem;
  std::vector<int> sizes{32};
  std::vector<double> mus{0.0};
  std::vector<double> nus{0.0};
  PerturbationMode mode = PerturbationMode::DenseRandom;
  std::uint64_t seed = 1;
  SolverCheck check = SolverCheck::GmresLinear;
  SolveConfig solver;
  WeightKind weight = WeightKind::XGram;
  int jobs = 1;
};

struct SweepPoint
{
  int size = 0;
  double mu = 0.0;
  double nu = 0.0;
  ConditionConstants constants;
  std::vector<BoundReport> reports;
  std::string error;
};

struct SweepResult
{
  std::vector<SweepPoint> points;  // ordered by (size, mu, nu)
  std::vector<BoundReport> summary;
  int violations = 0;
};

SweepResult sweep(const SweepConfig &cfg);

nlohmann::json toJson(const BoundReport &report);
nlohmann::json toJson(const StrangStudy &study);
nlohmann::json toJson(const SweepResult &result);
void writeStrangCsv(std::ostream &os, const StrangStudy &study);
void writeSweepCsv(std::ostream &os, const SweepResult &result);

int countViolations(const std::vector<BoundReport> &reports);

}  // namespace bpop
