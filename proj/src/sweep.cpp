// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

#include "bpop/bounds.hpp"
#include "bpop/io.hpp"

namespace bpop
{

std::pair<ProblemInstance, PreconditionerSet> makeProblem(const ProblemParams &params)
{
  switch (params.family)
  {
    case Family::Circle: return circleFourier(params.size, params.radius, params.c0);
    case Family::Fredholm: return fredholmSecondKind(params.size, params.kernelWidth, params.kernelScale);
    default: break;
  }
  throw NumericError(ErrorCode::InvalidArgument,
                     "family '" + familyName(params.family) + "' does not assemble a preconditioned system");
}

namespace
{

std::string csvQuote(const std::string &s)
{
  std::string out = "\"";
  for (char c : s)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + '"';
}

SweepPoint runPoint(const SweepConfig &cfg, int size, double mu, double nu)
{
  SweepPoint pt;
  pt.size = size;
  pt.mu = mu;
  pt.nu = nu;
  try
  {
    ProblemParams pp = cfg.problem;
    pp.size = size;
    auto [problem, prec] = makeProblem(pp);
    BiParametric bp;
    bp.mu = mu;
    bp.nu = nu;
    bp.mode = cfg.mode;
    bp.seed = cfg.seed;
    const PreconditionedSystem sys(std::move(problem), std::move(prec), bp);
    pt.constants = conditionConstants(sys);
    pt.reports = checkConditionBounds(sys, pt.constants);
    auto perturbation = checkPerturbationBounds(sys);
    pt.reports.insert(pt.reports.end(), perturbation.begin(), perturbation.end());
    std::vector<BoundReport> solver;
    switch (cfg.check)
    {
      case SolverCheck::None: break;
      case SolverCheck::GmresLinear: solver = checkGmresLinear(sys, cfg.solver, cfg.weight); break;
      case SolverCheck::GmresSuperlinear: solver = checkGmresSuperlinear(sys, cfg.solver); break;
      case SolverCheck::Cg: solver = checkCgElliptic(sys, cfg.solver); break;
    }
    pt.reports.insert(pt.reports.end(), solver.begin(), solver.end());
  }
  catch (const std::exception &e)
  {
    pt.error = e.what();
  }
  return pt;
}

}  // namespace

SweepResult sweep(const SweepConfig &cfg)
{
  if (cfg.sizes.empty() || cfg.mus.empty() || cfg.nus.empty())
  {
    throw NumericError(ErrorCode::InvalidArgument, "sweep: empty grid");
  }
  for (double v : cfg.mus)
  {
    if (!(v >= 0.0 && v < 1.0))
    {
      throw NumericError(ErrorCode::InvalidArgument, "mu must lie in [0,1)");
    }
  }
  for (double v : cfg.nus)
  {
    if (!(v >= 0.0 && v < 1.0))
    {
      throw NumericError(ErrorCode::InvalidArgument, "nu must lie in [0,1)");
    }
  }
  if (cfg.jobs < 1)
  {
    throw NumericError(ErrorCode::InvalidArgument, "sweep: jobs must be >= 1");
  }

  struct Task
  {
    int size;
    double mu, nu;
  };
  std::vector<Task> tasks;
  for (int s : cfg.sizes)
  {
    for (double mu : cfg.mus)
    {
      for (double nu : cfg.nus)
      {
        tasks.push_back({s, mu, nu});
      }
    }
  }

  SweepResult result;
  result.points.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
    {
      result.points[i] = runPoint(cfg, tasks[i].size, tasks[i].mu, tasks[i].nu);
    }
  };
  const int workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }

  for (const auto &pt : result.points)
  {
    result.violations += countViolations(pt.reports);
  }

  // h-independence of the unperturbed system across the size axis.
  if (cfg.problem.family == Family::Circle && cfg.sizes.size() > 1)
  {
    std::vector<double> kappas;
    for (int s : cfg.sizes)
    {
      ProblemParams pp = cfg.problem;
      pp.size = s;
      auto [problem, prec] = makeProblem(pp);
      kappas.push_back(conditionConstants(PreconditionedSystem(std::move(problem), std::move(prec))).kappaS);
    }
    const auto [lo, hi] = std::minmax_element(kappas.begin(), kappas.end());
    BoundContext ctx{familyName(cfg.problem.family), 0, 0.0, 0.0, ""};
    auto r = makeReport("sweep.h-independence", ctx, {*hi / *lo}, {config::hIndependenceRatio},
                        ToleranceKind::Absolute, 0.0);
    r.note = "max/min of kappa_S over sizes";
    result.summary.push_back(r);
    result.violations += countViolations(result.summary);
  }
  return result;
}

nlohmann::json toJson(const SweepResult &result)
{
  nlohmann::json points = nlohmann::json::array();
  int errors = 0;
  for (const auto &pt : result.points)
  {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto &r : pt.reports)
    {
      reports.push_back(toJson(r));
    }
    nlohmann::json j = {{"size", pt.size}, {"mu", pt.mu}, {"nu", pt.nu}, {"reports", reports}};
    if (pt.error.empty())
    {
      j["constants"] = describe(pt.constants);
    }
    else
    {
      j["error"] = pt.error;
      ++errors;
    }
    points.push_back(j);
  }
  nlohmann::json summary = nlohmann::json::array();
  for (const auto &r : result.summary)
  {
    summary.push_back(toJson(r));
  }
  return {{"points", points}, {"summary", summary}, {"violations", result.violations}, {"errors", errors}};
}

void writeSweepCsv(std::ostream &os, const SweepResult &result)
{
  os << "size,mu,nu,kStarMuNu,kappaS,kappa2,reports,violations,notApplicable,error\n";
  for (const auto &pt : result.points)
  {
    int na = 0;
    for (const auto &r : pt.reports)
    {
      na += r.status == BoundStatus::NotApplicable ? 1 : 0;
    }
    os << pt.size << ',' << io::formatDouble(pt.mu) << ',' << io::formatDouble(pt.nu) << ','
       << io::formatDouble(pt.constants.kStarMuNu) << ',' << io::formatDouble(pt.constants.kappaS) << ','
       << io::formatDouble(pt.constants.kappa2) << ',' << pt.reports.size() << ',' << countViolations(pt.reports) << ','
       << na << ',' << csvQuote(pt.error) << '\n';
  }
}

}  // namespace bpop
