// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "bpop/bounds.hpp"
#include "bpop/fov.hpp"
#include "bpop/io.hpp"

namespace bpop::cli
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string family = "circle";
  int modes = 32;
  int n = 64;
  double radius = 0.5;
  double c0 = 0.5;
  double kernelWidth = 0.5;
  double kernelScale = 1.0;
  double scale = 0.5;
  double grading = 2.0;

  double mu = 0.0;
  double nu = 0.0;
  std::optional<double> nuRhs;
  std::string mode = "denseRandom";
  std::uint64_t seed = 1;

  std::string method = "weighted-gmres";
  int restart = 0;
  std::string weight = "x-gram";
  double tol = 1e-10;
  int maxIter = 200;

  std::string out;
  int jobs = 1;
  int grid = 0;
  std::vector<double> mus;
  std::vector<double> nus;
  std::vector<int> sizes;
  std::string check = "gmres-linear";
  std::vector<int> levels{4, 8, 16, 32, 64};
  std::string nuRule = "zero";
  int samples = config::fovSamples;
  std::optional<double> p;
};

void requireLevel(double v, const char *name)
{
  if (!(v >= 0.0 && v < 1.0))
  {
    throw UsageError(std::string(name) + " must lie in [0,1)");
  }
}

Family family(const Options &o)
{
  try
  {
    return parseFamily(o.family);
  }
  catch (const NumericError &)
  {
    throw UsageError("unknown family '" + o.family + "' (circle, fredholm, graded, random)");
  }
}

template <typename F>
auto parsed(F &&f, const std::string &what)
{
  try
  {
    return f();
  }
  catch (const NumericError &)
  {
    throw UsageError("invalid " + what);
  }
}

ProblemParams problemParams(const Options &o)
{
  ProblemParams pp;
  pp.family = family(o);
  pp.size = pp.family == Family::Circle ? o.modes : o.n;
  pp.radius = o.radius;
  pp.c0 = o.c0;
  pp.kernelWidth = o.kernelWidth;
  pp.kernelScale = o.kernelScale;
  if (pp.family != Family::Circle && pp.family != Family::Fredholm)
  {
    throw UsageError("family '" + o.family + "' does not assemble a preconditioned system (use circle or fredholm)");
  }
  return pp;
}

BiParametric biParametric(const Options &o)
{
  requireLevel(o.mu, "mu");
  requireLevel(o.nu, "nu");
  if (o.nuRhs)
  {
    requireLevel(*o.nuRhs, "nu-rhs");
  }
  BiParametric bp;
  bp.mu = o.mu;
  bp.nu = o.nu;
  bp.nuRhs = o.nuRhs;
  bp.mode = parsed([&] { return parseMode(o.mode); }, "perturbation mode '" + o.mode + "'");
  bp.seed = o.seed;
  return bp;
}

PreconditionedSystem buildSystem(const Options &o)
{
  const BiParametric bp = biParametric(o);
  auto [problem, prec] = makeProblem(problemParams(o));
  return PreconditionedSystem(std::move(problem), std::move(prec), bp);
}

SolveConfig solveConfig(const Options &o)
{
  SolveConfig cfg;
  cfg.method = parsed([&] { return parseMethod(o.method); }, "method '" + o.method + "'");
  if (o.restart < 0)
  {
    throw UsageError("restart must be >= 0 (0 means full GMRES)");
  }
  if (o.restart > 0)
  {
    cfg.restart = o.restart;
  }
  if (!(o.tol > 0.0))
  {
    throw UsageError("tol must be positive");
  }
  if (o.maxIter < 1)
  {
    throw UsageError("max-iter must be >= 1");
  }
  cfg.tol = o.tol;
  cfg.maxIter = o.maxIter;
  return cfg;
}

WeightKind weightKind(const Options &o)
{
  return parsed([&] { return parseWeight(o.weight); }, "weight '" + o.weight + "'");
}

// JSON to <out>/<name> or to stdout when no directory was given.
void emitJson(const Options &o, const std::string &name, const json &value, std::ostream &out)
{
  if (o.out.empty())
  {
    out << io::dumpJson(value);
    return;
  }
  io::writeJson(fs::path(o.out) / name, value);
  out << "wrote " << (fs::path(o.out) / name).string() << '\n';
}

std::ofstream openOut(const Options &o, const std::string &name)
{
  const fs::path path = fs::path(o.out) / name;
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f)
  {
    throw NumericError(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  }
  return f;
}

void writeMatrix(const Options &o, const std::string &name, const ComplexMatrix &m)
{
  io::writeMatrixMarket(fs::path(o.out) / name, m,
                        isHermitian(m, 0.0) ? io::MatrixSymmetry::Hermitian : io::MatrixSymmetry::General);
}

json reportsJson(const std::vector<BoundReport> &reports)
{
  json arr = json::array();
  for (const auto &r : reports)
  {
    arr.push_back(toJson(r));
  }
  return arr;
}

int exitFor(const std::vector<BoundReport> &reports)
{
  return countViolations(reports) > 0 ? Violation : Ok;
}

template <typename T>
void append(std::vector<T> &to, const std::vector<T> &from)
{
  to.insert(to.end(), from.begin(), from.end());
}

// --- subcommands -----------------------------------------------------------

int cmdAssemble(const Options &o, std::ostream &out)
{
  const Family f = family(o);
  json info;
  if (f == Family::Random)
  {
    const ComplexMatrix a = randomDemo(o.n, o.scale, o.seed);
    info = {{"family", "random"}, {"n", o.n}, {"scale", o.scale}, {"seed", o.seed}};
    if (!o.out.empty())
    {
      writeMatrix(o, "A.mtx", a);
    }
  }
  else if (f == Family::Graded)
  {
    const auto [l2, h1] = gradedMass(o.n, o.grading);
    info = {{"family", "graded"}, {"n", o.n}, {"grading", o.grading},
            {"hMin", l2.meshMeta()->hMin}, {"hMax", l2.meshMeta()->hMax}};
    if (!o.out.empty())
    {
      writeMatrix(o, "gram_L2.mtx", l2.gram());
      writeMatrix(o, "gram_H1.mtx", h1.gram());
    }
  }
  else
  {
    auto [problem, prec] = makeProblem(problemParams(o));
    info = describe(problem);
    info["bubnovGalerkin"] = prec.bubnovGalerkin();
    info["constantsC"] = describe(prec.c().constants());
    info["constantsM"] = describe(prec.m().constants());
    info["constantsN"] = describe(prec.n().constants());
    if (!o.out.empty())
    {
      writeMatrix(o, "A.mtx", problem.op.matrix());
      writeMatrix(o, "C.mtx", prec.c().matrix());
      writeMatrix(o, "M.mtx", prec.m().matrix());
      writeMatrix(o, "N.mtx", prec.n().matrix());
      writeMatrix(o, "gram_X.mtx", problem.op.domain().gram());
      writeMatrix(o, "gram_Y.mtx", problem.op.rangeDual().gram());
      writeMatrix(o, "gram_V.mtx", prec.c().domain().gram());
      io::writeVectorCsv(fs::path(o.out) / "b.csv", problem.rhs);
      if (problem.exactCoeffs)
      {
        io::writeVectorCsv(fs::path(o.out) / "exact.csv", *problem.exactCoeffs);
      }
      if (problem.compactPart)
      {
        writeMatrix(o, "K.mtx", *problem.compactPart);
      }
    }
  }
  emitJson(o, "problem.json", info, out);
  return Ok;
}

int cmdPerturb(const Options &o, std::ostream &out)
{
  const PreconditionedSystem sys = buildSystem(o);
  const auto reports = checkPerturbationBounds(sys);
  json j = {{"mode", modeName(sys.params().mode)},
            {"seed", sys.params().seed},
            {"mu", sys.mu()},
            {"nu", sys.nu()},
            {"nuRhs", sys.params().rhsLevel()},
            {"nuActualA", sys.aMeasure().nuActual},
            {"nuActualC", sys.cMeasure().nuActual},
            {"nuActualB", sys.rhsMeasure()},
            {"truncationInfeasible", sys.truncationInfeasible()},
            {"constantsA", describe(sys.base().op.constants())},
            {"constantsAnu", describe(sys.aNu().constants())},
            {"constantsC", describe(sys.basePrec().c().constants())},
            {"constantsCmu", describe(sys.cMu().constants())},
            {"reports", reportsJson(reports)}};
  if (!o.out.empty())
  {
    writeMatrix(o, "A_nu.mtx", sys.aNu().matrix());
    writeMatrix(o, "C_mu.mtx", sys.cMu().matrix());
    io::writeVectorCsv(fs::path(o.out) / "b_nu.csv", sys.bNu());
  }
  emitJson(o, "perturb.json", j, out);
  return exitFor(reports);
}

int cmdSolve(const Options &o, std::ostream &out)
{
  const PreconditionedSystem sys = buildSystem(o);
  SolveConfig cfg = solveConfig(o);
  const ConditionConstants k = conditionConstants(sys);
  json j = {{"method", methodName(cfg.method)}, {"constants", describe(k)}};
  if (cfg.method == Method::Cg)
  {
    const auto res = cgSolve(sys, cfg);
    j["history"] = describe(res.history);
    if (!o.out.empty())
    {
      io::writeVectorCsv(fs::path(o.out) / "x.csv", res.x);
      auto f = openOut(o, "history.csv");
      f << "k,error,rate,bound\n";
      const double q = 1.0 - 2.0 / (std::sqrt(k.kStarMuNu) + 1.0);
      for (std::size_t i = 0; i < res.history.aNormErrors.size(); ++i)
      {
        const double bound = i == 0 ? 1.0 : std::pow(2.0, 1.0 / static_cast<double>(i)) * q;
        f << i << ',' << io::formatDouble(res.history.aNormErrors[i]) << ','
          << io::formatDouble(res.history.rates[i]) << ',' << io::formatDouble(bound) << '\n';
      }
    }
  }
  else
  {
    if (cfg.method == Method::WeightedGmres)
    {
      const WeightKind w = weightKind(o);
      cfg.weightGram = weightGram(sys, w);
      j["weight"] = weightName(w);
    }
    const auto res = gmresSolve(sys, cfg);
    j["history"] = describe(res.history);
    if (!o.out.empty())
    {
      io::writeVectorCsv(fs::path(o.out) / "x.csv", res.x);
      auto f = openOut(o, "history.csv");
      const double rate = std::sqrt(std::max(0.0, 1.0 - 1.0 / k.kStarMuNu));
      std::vector<double> bound(res.history.norms.size(), rate);
      if (cfg.method == Method::Gmres)
      {
        for (auto &b : bound)
        {
          b *= k.kLambda;
        }
      }
      writeHistoryCsv(f, res.history, bound);
    }
  }
  emitJson(o, "solve.json", j, out);
  return Ok;
}

int cmdFov(const Options &o, std::ostream &out)
{
  const Family f = family(o);
  json j;
  FovSample sample;
  if (f == Family::Random)
  {
    const SpectralPicture pic = spectralPicture(randomDemo(o.n, o.scale, o.seed), o.samples);
    sample = pic.fov;
    json eig = json::array();
    for (Index i = 0; i < pic.eigenvalues.size(); ++i)
    {
      eig.push_back({pic.eigenvalues(i).real(), pic.eigenvalues(i).imag()});
    }
    j = {{"family", "random"},     {"n", o.n},
         {"scale", o.scale},       {"seed", o.seed},
         {"kappa2", pic.kappa2},   {"kappaS", pic.kappaS},
         {"zeroInFov", pic.zeroInFov}, {"zeroInSpectrumHull", pic.zeroInSpectrumHull},
         {"fovDistance", pic.fovDistance}, {"eigenvalues", eig}};
  }
  else
  {
    const PreconditionedSystem sys = buildSystem(o);
    const WeightKind w = weightKind(o);
    const ComplexMatrix gram = weightGram(sys, w);
    const ComplexMatrix q = sys.explicitProduct();
    sample = fieldOfValues(q, gram, o.samples);
    const CoercivityConstants c = coercivityConstants(sys, gram);
    const CoercivityReport r = coercivityCheck(q, gram);
    j = {{"family", familyName(f)}, {"N", sys.dim()},        {"mu", sys.mu()},
         {"nu", sys.nu()},          {"weight", weightName(w)}, {"vH", c.vH},
         {"vHinv", c.vHinv},        {"containsZero", sample.containsZero},
         {"elliptic", r.elliptic},  {"rotation", r.rotation}, {"hNormal", r.hNormal},
         {"bestAngle", sample.bestAngle}};
  }
  if (!o.out.empty())
  {
    auto csv = openOut(o, "fov.csv");
    csv << "theta,support,re,im\n";
    for (Index i = 0; i < sample.angles.size(); ++i)
    {
      csv << io::formatDouble(sample.angles(i)) << ',' << io::formatDouble(sample.supportValues(i)) << ','
          << io::formatDouble(sample.boundaryPoints(i).real()) << ','
          << io::formatDouble(sample.boundaryPoints(i).imag()) << '\n';
    }
  }
  emitJson(o, "fov.json", j, out);
  return Ok;
}

int cmdCarleman(const Options &o, std::ostream &out)
{
  const PreconditionedSystem sys = buildSystem(o);
  const ProblemInstance &pb = sys.base();
  if (!pb.compactPart)
  {
    throw NumericError(ErrorCode::MissingCompactPart, "carleman: family '" + o.family + "' carries no compact part");
  }
  const double p = o.p.value_or(pb.carlemanIndex.value_or(2.0));
  const CarlemanDiagnostics d =
      carlemanDiagnostics(*pb.compactPart, sys.basePrec().m().matrix(), sys.trialSpace().gram(), p);
  const Index n = d.singularValues.size();
  std::vector<double> tail(n);
  for (Index k = 0; k < n; ++k)
  {
    tail[k] = p > 0.0 ? d.carlemanNorm * std::pow(static_cast<double>(k + 1), -1.0 / p) : d.carlemanNorm;
  }
  std::vector<double> means(d.partialMeans.data(), d.partialMeans.data() + n);
  const BoundContext ctx{familyName(pb.family), sys.dim(), sys.mu(), sys.nu(), ""};
  const std::vector<BoundReport> reports{
      makeReport("carleman.partial-mean-tail", ctx, means, tail, ToleranceKind::Relative, config::rateBoundTol)};
  json j = {{"p", p},
            {"carlemanNorm", d.carlemanNorm},
            {"singularValues", std::vector<double>(d.singularValues.data(), d.singularValues.data() + n)},
            {"partialMeans", means},
            {"reports", reportsJson(reports)}};
  if (!o.out.empty())
  {
    auto csv = openOut(o, "carleman.csv");
    csv << "k,sigma,partialMean,tail\n";
    for (Index k = 0; k < n; ++k)
    {
      csv << k + 1 << ',' << io::formatDouble(d.singularValues(k)) << ',' << io::formatDouble(means[k]) << ','
          << io::formatDouble(tail[k]) << '\n';
    }
  }
  emitJson(o, "carleman.json", j, out);
  return exitFor(reports);
}

int cmdVerify(const Options &o, std::ostream &out)
{
  const PreconditionedSystem sys = buildSystem(o);
  const SolveConfig cfg = solveConfig(o);
  const ConditionConstants k = conditionConstants(sys);
  std::vector<BoundReport> reports = checkConditionBounds(sys, k);
  append(reports, checkPerturbationBounds(sys));
  append(reports, checkCoercivityAssumption(sys));
  append(reports, checkGmresLinear(sys, cfg, WeightKind::XGram));
  if (sys.basePrec().bubnovGalerkin())
  {
    append(reports, checkGmresLinear(sys, cfg, WeightKind::Pinv));
  }
  if (sys.base().compactPart)
  {
    append(reports, checkGmresSuperlinear(sys, cfg));
  }
  try
  {
    append(reports, checkCgElliptic(sys, cfg));
  }
  catch (const NumericError &e)
  {
    if (e.code() != ErrorCode::NotHpd)
    {
      throw;
    }
    reports.push_back(notApplicable("cg.linear", contextOf(sys, "cg"), e.what()));
  }
  const json j = {{"constants", describe(k)},
                  {"coercivity", describe(coercivityConstants(sys))},
                  {"reports", reportsJson(reports)},
                  {"violations", countViolations(reports)}};
  emitJson(o, "report.json", j, out);
  return exitFor(reports);
}

int cmdSweep(const Options &o, std::ostream &out)
{
  SweepConfig sc;
  sc.problem = problemParams(o);
  const BiParametric bp = biParametric(o);
  sc.mode = bp.mode;
  sc.seed = o.seed;
  sc.solver = solveConfig(o);
  sc.weight = weightKind(o);
  sc.jobs = o.jobs;
  if (o.jobs < 1)
  {
    throw UsageError("jobs must be >= 1");
  }
  if (o.grid > 0)
  {
    sc.mus.clear();
    for (int i = 0; i < o.grid; ++i)
    {
      sc.mus.push_back(static_cast<double>(i) / o.grid);
    }
    sc.nus = sc.mus;
  }
  else if (o.grid < 0)
  {
    throw UsageError("grid must be positive");
  }
  if (!o.mus.empty())
  {
    sc.mus = o.mus;
  }
  if (!o.nus.empty())
  {
    sc.nus = o.nus;
  }
  for (double v : sc.mus)
  {
    requireLevel(v, "mu");
  }
  for (double v : sc.nus)
  {
    requireLevel(v, "nu");
  }
  sc.sizes = o.sizes.empty() ? std::vector<int>{sc.problem.size} : o.sizes;
  if (o.check == "none")
  {
    sc.check = SolverCheck::None;
  }
  else if (o.check == "gmres-linear")
  {
    sc.check = SolverCheck::GmresLinear;
  }
  else if (o.check == "gmres-superlinear")
  {
    sc.check = SolverCheck::GmresSuperlinear;
  }
  else if (o.check == "cg")
  {
    sc.check = SolverCheck::Cg;
  }
  else
  {
    throw UsageError("unknown check '" + o.check + "' (none, gmres-linear, gmres-superlinear, cg)");
  }

  const SweepResult res = sweep(sc);
  const json j = toJson(res);
  if (!o.out.empty())
  {
    auto csv = openOut(o, "sweep.csv");
    writeSweepCsv(csv, res);
  }
  emitJson(o, "sweep.json", j, out);
  if (res.violations > 0)
  {
    return Violation;
  }
  return j.at("errors").get<int>() > 0 ? Numeric : Ok;
}

NuRule parseNuRule(const std::string &text)
{
  NuRule rule;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');)
  {
    parts.push_back(part);
  }
  auto number = [&](std::size_t i) {
    try
    {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size())
      {
        throw std::invalid_argument("trailing");
      }
      return v;
    }
    catch (const std::exception &)
    {
      throw UsageError("invalid nu-rule '" + text + "' (zero, fixed:V, rate:C or rate:C:R)");
    }
  };
  if (parts.size() == 1 && parts[0] == "zero")
  {
    rule.kind = NuRule::Kind::Zero;
  }
  else if (parts.size() == 2 && parts[0] == "fixed")
  {
    rule.kind = NuRule::Kind::Fixed;
    rule.value = number(1);
    requireLevel(rule.value, "nu");
  }
  else if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "rate")
  {
    rule.kind = NuRule::Kind::Rate;
    rule.constant = number(1);
    if (parts.size() == 3)
    {
      rule.rate = number(2);
    }
  }
  else
  {
    throw UsageError("invalid nu-rule '" + text + "' (zero, fixed:V, rate:C or rate:C:R)");
  }
  return rule;
}

int cmdStrang(const Options &o, std::ostream &out)
{
  const NuRule rule = parseNuRule(o.nuRule);
  const PerturbationMode mode = parsed([&] { return parseMode(o.mode); }, "perturbation mode '" + o.mode + "'");
  const StrangStudy study = strangStudy(family(o), o.levels, rule, o.seed, mode);
  if (!o.out.empty())
  {
    auto csv = openOut(o, "strang.csv");
    writeStrangCsv(csv, study);
  }
  emitJson(o, "strang.json", toJson(study), out);
  return exitFor(study.reports);
}

// --- option wiring ---------------------------------------------------------

void problemOptions(CLI::App *sub, Options &o)
{
  sub->add_option("--family", o.family, "circle | fredholm | graded | random")->capture_default_str();
  sub->add_option("--modes", o.modes, "Fourier modes K of the circle family (N = 2K+1)")->capture_default_str();
  sub->add_option("--n", o.n, "size of the fredholm, graded and random families")->capture_default_str();
  sub->add_option("--radius", o.radius, "circle radius, in (0,1)")->capture_default_str();
  sub->add_option("--c0", o.c0, "zero-mode stabilization of the hypersingular symbol")->capture_default_str();
  sub->add_option("--kernel-width", o.kernelWidth, "Gaussian kernel width (fredholm)")->capture_default_str();
  sub->add_option("--kernel-scale", o.kernelScale, "Gaussian kernel amplitude (fredholm)")->capture_default_str();
  sub->add_option("--scale", o.scale, "entry scale of the random family")->capture_default_str();
  sub->add_option("--grading", o.grading, "mesh grading exponent (graded)")->capture_default_str();
  sub->add_option("--seed", o.seed, "seed of all random draws")->capture_default_str();
  sub->add_option("--out", o.out, "output directory; JSON goes to stdout when omitted");
}

void perturbationOptions(CLI::App *sub, Options &o)
{
  sub->add_option("--mu", o.mu, "perturbation level of C, in [0,1)")->capture_default_str();
  sub->add_option("--nu", o.nu, "perturbation level of A, in [0,1)")->capture_default_str();
  sub->add_option("--nu-rhs", o.nuRhs, "perturbation level of b (defaults to --nu)");
  sub->add_option("--mode", o.mode, "denseRandom | svdTruncation | entryDrop")->capture_default_str();
}

void solverOptions(CLI::App *sub, Options &o)
{
  sub->add_option("--method", o.method, "gmres | weighted-gmres | cg")->capture_default_str();
  sub->add_option("--restart", o.restart, "GMRES restart length m (0 = full GMRES)")->capture_default_str();
  sub->add_option("--weight", o.weight, "x-gram | pinv | euclid")->capture_default_str();
  sub->add_option("--tol", o.tol, "relative stopping tolerance")->capture_default_str();
  sub->add_option("--max-iter", o.maxIter, "iteration cap")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  Options o;
  CLI::App app{"Bi-parametric operator preconditioning lab: assemble Galerkin systems, perturb them, "
               "solve with GMRES(m) or CG and check the condition and convergence bounds.",
               "bpop-lab"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto *assemble = app.add_subcommand(
      "assemble", "Write the Galerkin matrices, Gram matrices and load vector of a model family "
                  "(the operator preconditioning setting of Theorem 'Estimates for OP-PG').");
  problemOptions(assemble, o);

  auto *perturb = app.add_subcommand(
      "perturb", "Perturb A, C and b at levels nu, mu and check the stability proposition for the perturbed "
                 "forms: gamma_{A_nu} >= (1-nu) gamma_A and ||a_nu|| <= ||a|| + nu gamma_A.");
  problemOptions(perturb, o);
  perturbationOptions(perturb, o);

  auto *solve = app.add_subcommand(
      "solve", "Solve P_mu A_nu u = P_mu b_nu with Euclidean or weighted GMRES(m) or CG and write the residual "
               "history with the bound of Theorem 'GMRES(m): Linear convergence estimates' or Corollary "
               "'Elliptic Case'.");
  problemOptions(solve, o);
  perturbationOptions(solve, o);
  solverOptions(solve, o);

  auto *fov = app.add_subcommand(
      "fov", "Sample the field of values of P_mu A_nu in the chosen geometry (Assumption (X_h)-coercivity and the "
             "weighted GMRES lemma); for the random family, the Euclidean picture of kappa_2, kappa_S, F_2 and the "
             "spectral hull.");
  problemOptions(fov, o);
  perturbationOptions(fov, o);
  fov->add_option("--weight", o.weight, "x-gram | pinv | euclid")->capture_default_str();
  fov->add_option("--samples", o.samples, "number of support angles")->capture_default_str();

  auto *carleman = app.add_subcommand(
      "carleman", "Singular values, partial means and the p-Carleman class tail of the compact part (Theorem "
                  "'GMRES: Super-linear convergence estimates').");
  problemOptions(carleman, o);
  perturbationOptions(carleman, o);
  carleman->add_option("--p", o.p, "Carleman class index (defaults to the family's)");

  auto *verify = app.add_subcommand(
      "verify", "Check every bound on one instance: Theorem 'Estimates for OP-PG', Theorem 'Bi-Parametric "
                "Operator Preconditioning', the GMRES(m) linear and super-linear theorems, Corollary "
                "'Preconditioner-induced norm' and Corollary 'Elliptic Case'. Exit 1 on a violation.");
  problemOptions(verify, o);
  perturbationOptions(verify, o);
  solverOptions(verify, o);

  auto *sweepCmd = app.add_subcommand(
      "sweep", "Run the condition and one solver check over a (mu, nu, N) grid (Theorem 'Bi-Parametric Operator "
               "Preconditioning', Corollary 'h-Asymptotics'). Exit 1 on a violation.");
  problemOptions(sweepCmd, o);
  perturbationOptions(sweepCmd, o);
  solverOptions(sweepCmd, o);
  sweepCmd->add_option("--grid", o.grid, "n: mu and nu range over {0, 1/n, ..., (n-1)/n}");
  sweepCmd->add_option("--mus", o.mus, "explicit mu values")->delimiter(',');
  sweepCmd->add_option("--nus", o.nus, "explicit nu values")->delimiter(',');
  sweepCmd->add_option("--sizes", o.sizes, "sizes (modes or n) of the N axis")->delimiter(',');
  sweepCmd->add_option("--check", o.check, "none | gmres-linear | gmres-superlinear | cg")->capture_default_str();
  sweepCmd->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();

  auto *strang = app.add_subcommand(
      "strang", "Discretization error of the perturbed Galerkin solution against Lemma 'First Strang's Lemma' "
                "and Lemma 'Cea's Lemma' over refinement levels. Exit 1 on a violation.");
  problemOptions(strang, o);
  strang->add_option("--levels", o.levels, "refinement levels (modes)")->delimiter(',');
  strang->add_option("--nu-rule", o.nuRule, "zero | fixed:V | rate:C (nu = C h^order) | rate:C:R")
      ->capture_default_str();
  strang->add_option("--mode", o.mode, "denseRandom | svdTruncation | entryDrop")->capture_default_str();

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::CallForHelp &e)
  {
    app.exit(e, out, err);
    return Ok;
  }
  catch (const CLI::CallForAllHelp &e)
  {
    app.exit(e, out, err);
    return Ok;
  }
  catch (const CLI::ParseError &e)
  {
    err << "error: " << e.what() << '\n' << app.help("", CLI::AppFormatMode::Normal);
    return Usage;
  }

  try
  {
    if (*assemble) return cmdAssemble(o, out);
    if (*perturb) return cmdPerturb(o, out);
    if (*solve) return cmdSolve(o, out);
    if (*fov) return cmdFov(o, out);
    if (*carleman) return cmdCarleman(o, out);
    if (*verify) return cmdVerify(o, out);
    if (*sweepCmd) return cmdSweep(o, out);
    if (*strang) return cmdStrang(o, out);
  }
  catch (const UsageError &e)
  {
    err << "error: " << e.what() << '\n';
    return Usage;
  }
  catch (const NumericError &e)
  {
    err << e.what() << '\n';
    return Numeric;
  }
  catch (const fs::filesystem_error &e)
  {
    err << "Io: " << e.what() << '\n';
    return Numeric;
  }
  return Usage;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
  {
    args.emplace_back(argv[i]);
  }
  return run(args, out, err);
}

}  // namespace bpop::cli
