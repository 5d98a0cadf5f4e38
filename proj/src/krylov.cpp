// SPDX-License-Identifier: Apache-2.0
#include "bpop/krylov.hpp"

#include <cmath>
#include <ostream>

#include "bpop/io.hpp"

namespace bpop
{

std::string methodName(Method method)
{
  switch (method)
  {
    case Method::Gmres: return "gmres";
    case Method::WeightedGmres: return "weighted-gmres";
    case Method::Cg: return "cg";
  }
  return "gmres";
}

Method parseMethod(const std::string &name)
{
  for (auto m : {Method::Gmres, Method::WeightedGmres, Method::Cg})
  {
    if (methodName(m) == name)
    {
      return m;
    }
  }
  throw NumericError(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

void validate(const SolveConfig &cfg, Index dim)
{
  if (!(cfg.tol > 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "tol must be positive");
  }
  if (cfg.maxIter < 1)
  {
    throw NumericError(ErrorCode::InvalidArgument, "max-iter must be at least 1");
  }
  if (cfg.restart && (*cfg.restart < 1 || *cfg.restart > dim))
  {
    throw NumericError(ErrorCode::InvalidArgument, "restart must lie in [1, N]");
  }
  if (cfg.weightGram && (cfg.weightGram->rows() != dim || cfg.weightGram->cols() != dim))
  {
    throw NumericError(ErrorCode::DimensionMismatch, "weight Gram size differs from system size");
  }
}

namespace
{

// Inner product (u, v)_H = v^H H u; identity when no Gram is given.
class WeightedInner
{
public:
  explicit WeightedInner(const std::optional<ComplexMatrix> &gram) : gram_(gram ? &*gram : nullptr) {}

  ComplexVector apply(const ComplexVector &v) const { return gram_ ? ComplexVector(*gram_ * v) : v; }
  double norm(const ComplexVector &v) const { return std::sqrt(std::max(0.0, v.dot(apply(v)).real())); }

private:
  const ComplexMatrix *gram_;
};

std::vector<double> ratesOf(const std::vector<double> &norms)
{
  std::vector<double> rates(norms.size(), 1.0);
  for (std::size_t k = 1; k < norms.size(); ++k)
  {
    rates[k] = norms[0] > 0.0 ? std::pow(norms[k] / norms[0], 1.0 / static_cast<double>(k)) : 0.0;
  }
  return rates;
}

}  // namespace

SolveResult<ResidualHistory> gmres(const LinearOperator &q, const ComplexVector &rhs, const SolveConfig &cfg)
{
  const Index n = rhs.size();
  validate(cfg, n);
  const WeightedInner inner(cfg.weightGram);
  const int m = cfg.restart.value_or(cfg.maxIter);

  SolveResult<ResidualHistory> out;
  ResidualHistory &hist = out.history;
  hist.restart = cfg.restart;
  out.x = ComplexVector::Zero(n);

  auto record = [&](const ComplexVector &x, const ComplexVector &r) {
    hist.iterates.push_back(x);
    hist.residuals.push_back(r);
    hist.norms.push_back(inner.norm(r));
  };
  record(out.x, rhs);
  const double r0 = hist.norms[0];
  if (r0 == 0.0)
  {
    hist.converged = true;
    hist.rates = ratesOf(hist.norms);
    return out;
  }

  std::vector<ComplexVector> basis;
  std::vector<ComplexVector> hBasis;  // H v_i
  ComplexMatrix hess(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  ComplexVector g(m + 1);

  bool stop = false;
  while (!stop && hist.iterations < cfg.maxIter)
  {
    const ComplexVector r = hist.residuals.back();
    const double beta = hist.norms.back();
    basis.assign(1, r / beta);
    hBasis.assign(1, inner.apply(basis[0]));
    hess.setZero();
    g.setZero();
    g(0) = beta;
    const ComplexVector xStart = out.x;

    for (int j = 0; j < m && hist.iterations < cfg.maxIter; ++j)
    {
      ComplexVector w = q(basis[j]);
      ComplexVector hw = inner.apply(w);
      const double wNorm0 = std::sqrt(std::max(0.0, w.dot(hw).real()));
      for (int pass = 0; pass < 2; ++pass)
      {
        for (int i = 0; i <= j; ++i)
        {
          const Complex hij = basis[i].dot(hw);  // v_i^H H w
          hess(i, j) += hij;
          w -= hij * basis[i];
          hw -= hij * hBasis[i];
        }
        const double wn = std::sqrt(std::max(0.0, w.dot(hw).real()));
        double loss = 0.0;
        for (int i = 0; i <= j; ++i)
        {
          loss = std::max(loss, std::abs(basis[i].dot(hw)));
        }
        if (!(wn > 0.0) || loss <= config::reorthogonalizeTol * wn)
        {
          break;
        }
      }
      const double hNext = std::sqrt(std::max(0.0, w.dot(hw).real()));
      if (!std::isfinite(hNext))
      {
        throw NumericError(ErrorCode::Breakdown, "gmres: Arnoldi vector is not finite");
      }
      hess(j + 1, j) = hNext;

      for (int i = 0; i < j; ++i)
      {
        const Complex a = hess(i, j);
        const Complex b = hess(i + 1, j);
        hess(i, j) = cs[i] * a + sn[i] * b;
        hess(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * b;
      }
      {
        const Complex a = hess(j, j);
        const Complex b = hess(j + 1, j);
        const double rho = std::hypot(std::abs(a), std::abs(b));
        if (std::abs(a) == 0.0)
        {
          cs[j] = 0.0;
          sn[j] = 1.0;
        }
        else
        {
          cs[j] = std::abs(a) / rho;
          sn[j] = (a / std::abs(a)) * std::conj(b) / rho;
        }
        hess(j, j) = cs[j] * a + sn[j] * b;
        hess(j + 1, j) = 0.0;
        g(j + 1) = -std::conj(sn[j]) * g(j);
        g(j) = cs[j] * g(j);
      }
      ++hist.iterations;

      const ComplexVector y =
          hess.topLeftCorner(j + 1, j + 1).triangularView<Eigen::Upper>().solve(g.head(j + 1));
      ComplexVector x = xStart;
      for (int i = 0; i <= j; ++i)
      {
        x += y(i) * basis[i];
      }
      out.x = x;
      record(x, rhs - q(x));

      const bool happy = hNext <= config::breakdownTol * std::max(wNorm0, 1e-300);
      if (happy || hist.norms.back() <= cfg.tol * r0)
      {
        hist.converged = true;
        stop = true;
        break;
      }
      basis.push_back(w / hNext);
      hBasis.push_back(hw / hNext);
    }
  }
  hist.rates = ratesOf(hist.norms);
  return out;
}

SolveResult<ResidualHistory> gmresSolve(const PreconditionedSystem &sys, const SolveConfig &cfg)
{
  const LinearOperator q = [&sys](const ComplexVector &u) { return applyPreconditioned(sys, u); };
  SolveConfig c = cfg;
  if (cfg.method == Method::Gmres)
  {
    c.weightGram.reset();
  }
  return gmres(q, sys.preconditionedRhs(), c);
}

SolveResult<CgErrorHistory> pcg(const ComplexMatrix &a, const ComplexVector &b, const LinearOperator &prec,
                                const SolveConfig &cfg)
{
  validate(cfg, b.size());
  if (!isHermitian(a, 1e-10))
  {
    throw NumericError(ErrorCode::NotHpd, "cg: system matrix is not Hermitian");
  }
  const ComplexVector exact = solveLinear(a, b);
  auto aNorm = [&](const ComplexVector &e) { return std::sqrt(std::max(0.0, e.dot(a * e).real())); };

  SolveResult<CgErrorHistory> out;
  CgErrorHistory &hist = out.history;
  out.x = ComplexVector::Zero(b.size());
  hist.aNormErrors.push_back(aNorm(exact));
  const double e0 = hist.aNormErrors[0];
  if (e0 == 0.0)
  {
    hist.converged = true;
    hist.rates = ratesOf(hist.aNormErrors);
    return out;
  }

  ComplexVector r = b;
  ComplexVector z = prec(r);
  double rz = r.dot(z).real();
  if (!(rz > 0.0))
  {
    throw NumericError(ErrorCode::NotHpd, "cg: preconditioner is not positive definite");
  }
  ComplexVector p = z;
  while (hist.iterations < cfg.maxIter)
  {
    const ComplexVector ap = a * p;
    const double curvature = p.dot(ap).real();
    if (!(curvature > 0.0))
    {
      throw NumericError(ErrorCode::NotHpd, "cg: non-positive curvature p^H A p");
    }
    const double alpha = rz / curvature;
    out.x += alpha * p;
    r -= alpha * ap;
    ++hist.iterations;
    hist.aNormErrors.push_back(aNorm(exact - out.x));
    if (hist.aNormErrors.back() <= cfg.tol * e0 || r.norm() == 0.0)
    {
      hist.converged = true;
      break;
    }
    z = prec(r);
    const double rzNext = r.dot(z).real();
    if (!(rzNext > 0.0))
    {
      throw NumericError(ErrorCode::NotHpd, "cg: preconditioner is not positive definite");
    }
    p = z + (rzNext / rz) * p;
    rz = rzNext;
  }
  hist.rates = ratesOf(hist.aNormErrors);
  return out;
}

SolveResult<CgErrorHistory> cgSolve(const PreconditionedSystem &sys, const SolveConfig &cfg)
{
  const LinearOperator prec = [&sys](const ComplexVector &y) { return sys.applyPreconditioner(y); };
  return pcg(sys.aNu().matrix(), sys.bNu(), prec, cfg);
}

CrossCheckReport residualCrossCheck(const ResidualHistory &histEuclid, const ResidualHistory &histWeighted,
                                    const ComplexMatrix &gram)
{
  if (histEuclid.residuals.empty() || histWeighted.residuals.empty())
  {
    throw NumericError(ErrorCode::MismatchedRuns, "residualCrossCheck: empty history");
  }
  const ComplexVector &r0 = histEuclid.residuals[0];
  if (r0.size() != histWeighted.residuals[0].size() || r0.size() != gram.rows())
  {
    throw NumericError(ErrorCode::MismatchedRuns, "residualCrossCheck: dimensions differ");
  }
  const double scale = r0.norm();
  if ((r0 - histWeighted.residuals[0]).norm() > 1e-12 * std::max(scale, 1e-300))
  {
    throw NumericError(ErrorCode::MismatchedRuns, "residualCrossCheck: runs start from different residuals");
  }

  auto cycleEnd = [](const ResidualHistory &h) {
    int last = static_cast<int>(h.residuals.size()) - 1;
    return h.restart ? std::min(last, *h.restart) : last;
  };
  const int kMax = std::min(cycleEnd(histEuclid), cycleEnd(histWeighted));
  const std::optional<ComplexMatrix> weight(gram);
  const WeightedInner inner(weight);
  const double tolE = config::crossCheckTol * scale;
  const double tolH = config::crossCheckTol * inner.norm(r0);

  CrossCheckReport report;
  report.checkedUpTo = kMax;
  for (int k = 0; k <= kMax; ++k)
  {
    const ComplexVector &re = histEuclid.residuals[k];
    const ComplexVector &rw = histWeighted.residuals[k];
    CrossCheckStep s;
    s.k = k;
    s.euclidOfEuclid = re.norm();
    s.euclidOfWeighted = rw.norm();
    s.weightedOfWeighted = inner.norm(rw);
    s.weightedOfEuclid = inner.norm(re);
    s.holds = s.euclidOfEuclid <= s.euclidOfWeighted + tolE && s.weightedOfWeighted <= s.weightedOfEuclid + tolH;
    report.allHold = report.allHold && s.holds;
    report.steps.push_back(s);
  }
  return report;
}

void writeHistoryCsv(std::ostream &os, const ResidualHistory &history, const std::vector<double> &bound)
{
  os << "k,norm,rate,bound\n";
  for (std::size_t k = 0; k < history.norms.size(); ++k)
  {
    os << k << ',' << io::formatDouble(history.norms[k]) << ',' << io::formatDouble(history.rates[k]) << ',';
    if (k < bound.size())
    {
      os << io::formatDouble(bound[k]);
    }
    os << '\n';
  }
}

nlohmann::json describe(const ResidualHistory &history)
{
  return {{"norms", history.norms},
          {"rates", history.rates},
          {"converged", history.converged},
          {"iterations", history.iterations},
          {"restart", history.restart ? nlohmann::json(*history.restart) : nlohmann::json(nullptr)}};
}

nlohmann::json describe(const CgErrorHistory &history)
{
  return {{"aNormErrors", history.aNormErrors},
          {"rates", history.rates},
          {"converged", history.converged},
          {"iterations", history.iterations}};
}

}  // namespace bpop
