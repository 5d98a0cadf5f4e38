// SPDX-License-Identifier: Apache-2.0
#include "bpop/problems.hpp"

#include <cmath>

#include "bpop/random.hpp"

namespace bpop
{

OperatorConstants computeConstants(const ComplexMatrix &matrix, const DiscreteSpace &domain,
                                   const DiscreteSpace &rangeDual)
{
  if (matrix.cols() != domain.dim() || matrix.rows() != rangeDual.dim())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "GalerkinOperator: matrix shape differs from its spaces");
  }
  const ComplexMatrix scaled = rangeDual.invSqrtGram() * matrix * domain.invSqrtGram();
  const RealVector s = svd(scaled).singularValues;
  OperatorConstants c;
  if (s.size() > 0)
  {
    c.contNorm = s(0);
    c.gamma = s(s.size() - 1);
  }
  return c;
}

GalerkinOperator::GalerkinOperator(ComplexMatrix matrix, DiscreteSpace domain, DiscreteSpace rangeDual)
  : matrix_(std::move(matrix)), domain_(std::move(domain)), rangeDual_(std::move(rangeDual))
{
  if (!matrix_.allFinite())
  {
    throw NumericError(ErrorCode::InvalidArgument, "GalerkinOperator: non-finite entry");
  }
  constants_ = computeConstants(matrix_, domain_, rangeDual_);
}

ComplexMatrix GalerkinOperator::normalized() const
{
  return rangeDual_.invSqrtGram() * matrix_ * domain_.invSqrtGram();
}

GalerkinOperator GalerkinOperator::withMatrix(ComplexMatrix matrix) const
{
  return GalerkinOperator(std::move(matrix), domain_, rangeDual_);
}

std::string familyName(Family family)
{
  switch (family)
  {
    case Family::Circle: return "circle";
    case Family::Fredholm: return "fredholm";
    case Family::Graded: return "graded";
    case Family::Random: return "random";
    case Family::Custom: return "custom";
  }
  return "custom";
}

Family parseFamily(const std::string &name)
{
  for (Family f : {Family::Circle, Family::Fredholm, Family::Graded, Family::Random, Family::Custom})
  {
    if (familyName(f) == name)
    {
      return f;
    }
  }
  throw NumericError(ErrorCode::InvalidArgument, "unknown family '" + name + "'");
}

PreconditionerSet::PreconditionerSet(GalerkinOperator c, GalerkinOperator m, GalerkinOperator n,
                                     bool bubnovGalerkin)
  : c_(std::move(c)), m_(std::move(m)), n_(std::move(n)), bubnovGalerkin_(bubnovGalerkin)
{
  const Index dim = c_.dim();
  for (const GalerkinOperator *op : {&c_, &m_, &n_})
  {
    if (op->matrix().rows() != dim || op->matrix().cols() != dim)
    {
      throw NumericError(ErrorCode::DimensionMismatch, "PreconditionerSet: C, M, N must be square of one size");
    }
  }
  requireSameSpace(c_.domain(), n_.domain(), "PreconditionerSet (V_h)");
  requireSameSpace(c_.rangeDual(), m_.rangeDual(), "PreconditionerSet (W_h)");
  if (!(m_.gamma() > 0.0) || !(n_.gamma() > 0.0))
  {
    throw NumericError(ErrorCode::Singular, "PreconditionerSet: pairing matrices M and N must be nonsingular");
  }

  if (bubnovGalerkin_)
  {
    requireSameSpace(c_.domain(), c_.rangeDual(), "PreconditionerSet Bubnov-Galerkin (V_h = W_h)");
    requireSameSpace(m_.domain(), n_.rangeDual(), "PreconditionerSet Bubnov-Galerkin (X_h = Y_h)");
    const ComplexMatrix &mm = m_.matrix();
    const double scale = std::max(mm.cwiseAbs().maxCoeff(), 1e-300);
    if ((n_.matrix() - mm.adjoint()).cwiseAbs().maxCoeff() > config::hermitianTol * scale)
    {
      throw NumericError(ErrorCode::NotHpd, "PreconditionerSet Bubnov-Galerkin: N differs from M^H");
    }
    ComplexMatrix pinv = n_.matrix() * LuSolver<Complex>(c_.matrix()).solve(mm);
    if (!isHermitian(pinv, 1e-10))
    {
      throw NumericError(ErrorCode::NotHpd, "PreconditionerSet Bubnov-Galerkin: N C^{-1} M is not Hermitian");
    }
    pinv = (pinv + pinv.adjoint()) / 2.0;
    const RealVector ev = hermitianEigen(pinv, false).eigenvalues;
    if (!(ev(ev.size() - 1) > 0.0))
    {
      throw NumericError(ErrorCode::NotHpd, "PreconditionerSet Bubnov-Galerkin: N C^{-1} M is not positive definite");
    }
    pinvGram_ = std::move(pinv);
  }
}

PreconditionerSet PreconditionerSet::withC(GalerkinOperator c) const
{
  return PreconditionerSet(std::move(c), m_, n_, bubnovGalerkin_);
}

void PreconditionerSet::requireCompatible(const GalerkinOperator &a) const
{
  requireSameSpace(a.domain(), m_.domain(), "operator domain vs M domain (X_h)");
  requireSameSpace(a.rangeDual(), n_.rangeDual(), "operator range vs N range (Y_h)");
}

namespace
{

double hypersingularSymbol(int k, double c0)
{
  return std::max(static_cast<double>(std::abs(k)), c0) / 2.0;
}

double singleLayerSymbol(int k, double radius)
{
  return k == 0 ? -radius * std::log(radius) : radius / (2.0 * std::abs(k));
}

double circleRhs(int k)
{
  const double t = 1.0 + static_cast<double>(k) * k;
  return 1.0 / (t * t);
}

ComplexMatrix diagonal(const RealVector &d)
{
  return d.cast<Complex>().asDiagonal();
}

}  // namespace

CircleContinuumConstants circleContinuumConstants(double c0)
{
  // Normalized symbol w_k / sqrt(1 + k^2) increases in |k| >= 1 towards 1/2.
  CircleContinuumConstants c;
  c.gammaA = std::min(c0 / 2.0, 1.0 / (2.0 * std::sqrt(2.0)));
  c.normA = std::max(c0 / 2.0, 0.5);
  return c;
}

ComplexVector circleExactCoefficients(int modes, double c0)
{
  ComplexVector u(2 * modes + 1);
  for (int k = -modes; k <= modes; ++k)
  {
    u(circleModeIndex(modes, k)) = circleRhs(k) / hypersingularSymbol(k, c0);
  }
  return u;
}

std::pair<ProblemInstance, PreconditionerSet> circleFourier(int modes, double radius, double c0)
{
  if (modes < 1)
  {
    throw NumericError(ErrorCode::InvalidArgument, "circleFourier: modes must be >= 1");
  }
  if (!(radius > 0.0) || radius >= 1.0)
  {
    throw NumericError(ErrorCode::InvalidRadius, "circleFourier: radius must lie in (0,1)");
  }
  if (!(c0 > 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "circleFourier: stabilization c0 must be positive");
  }
  const Index dim = 2 * modes + 1;
  RealVector w(dim), v(dim), sPlus(dim), sMinus(dim);
  ComplexVector b(dim);
  for (int k = -modes; k <= modes; ++k)
  {
    const Index i = circleModeIndex(modes, k);
    const double s = std::sqrt(1.0 + static_cast<double>(k) * k);
    w(i) = hypersingularSymbol(k, c0);
    v(i) = singleLayerSymbol(k, radius);
    sPlus(i) = s;
    sMinus(i) = 1.0 / s;
    b(i) = circleRhs(k);
  }
  DiscreteSpace x("H^{1/2}(circle) Fourier", diagonal(sPlus), std::nullopt, 0.5);
  DiscreteSpace vspace("H^{-1/2}(circle) Fourier", diagonal(sMinus), std::nullopt, -0.5);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);

  GalerkinOperator a(diagonal(w), x, x);
  GalerkinOperator c(diagonal(v), vspace, vspace);
  GalerkinOperator m(id, x, vspace);
  GalerkinOperator n(id, vspace, x);

  ProblemInstance problem{a, b, Family::Circle, {}, {}, {}, {}, {}};
  problem.parameters = {{"modes", modes}, {"radius", radius}, {"c0", c0}};
  problem.exactCoeffs = circleExactCoefficients(modes, c0);
  return {std::move(problem), PreconditionerSet(c, m, n, true)};
}

std::pair<ProblemInstance, PreconditionerSet> fredholmSecondKind(int n, double kernelWidth, double kernelScale)
{
  if (n < 4)
  {
    throw NumericError(ErrorCode::InvalidArgument, "fredholmSecondKind: n must be >= 4");
  }
  if (!(kernelWidth > 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "fredholmSecondKind: kernel width must be positive");
  }
  if (!(kernelScale >= 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "fredholmSecondKind: kernel scale must be non-negative");
  }
  const double h = 1.0 / n;
  const ComplexMatrix mass = ComplexMatrix::Identity(n, n) * h;
  ComplexMatrix k(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double d = (i - j) * h;
      k(i, j) = kernelScale * h * h * std::exp(-d * d / (kernelWidth * kernelWidth));
    }
  }
  DiscreteSpace l2("L^2(0,1) P0", mass, MeshMeta{h, h, 0.0});

  GalerkinOperator a(mass + k, l2, l2);
  GalerkinOperator c(mass, l2, l2);
  GalerkinOperator m(mass, l2, l2);
  GalerkinOperator nOp(mass, l2, l2);

  ProblemInstance problem{a, ComplexVector::Constant(n, Complex(h, 0.0)), Family::Fredholm, {}, {}, {}, {}, {}};
  problem.parameters = {{"n", n}, {"kernelWidth", kernelWidth}, {"kernelScale", kernelScale}};
  problem.compactPart = k;
  problem.identityPart = mass;
  problem.carlemanIndex = 2.0;
  return {std::move(problem), PreconditionerSet(c, m, nOp, true)};
}

std::pair<DiscreteSpace, DiscreteSpace> gradedMass(int n, double grading)
{
  if (n < 2)
  {
    throw NumericError(ErrorCode::InvalidArgument, "gradedMass: n must be >= 2");
  }
  if (!(grading >= 1.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "gradedMass: grading must be >= 1");
  }
  ComplexMatrix mass = ComplexMatrix::Zero(n + 1, n + 1);
  ComplexMatrix stiff = ComplexMatrix::Zero(n + 1, n + 1);
  double hMin = 1.0, hMax = 0.0;
  for (int e = 0; e < n; ++e)
  {
    const double h = std::pow(double(e + 1) / n, grading) - std::pow(double(e) / n, grading);
    hMin = std::min(hMin, h);
    hMax = std::max(hMax, h);
    mass(e, e) += h / 3.0;
    mass(e + 1, e + 1) += h / 3.0;
    mass(e, e + 1) += h / 6.0;
    mass(e + 1, e) += h / 6.0;
    stiff(e, e) += 1.0 / h;
    stiff(e + 1, e + 1) += 1.0 / h;
    stiff(e, e + 1) -= 1.0 / h;
    stiff(e + 1, e) -= 1.0 / h;
  }
  return {DiscreteSpace("L^2(0,1) P1 graded", mass, MeshMeta{hMin, hMax, 0.0}),
          DiscreteSpace("H^1(0,1) P1 graded", stiff + mass, MeshMeta{hMin, hMax, 1.0})};
}

ComplexMatrix randomDemo(int n, double scale, std::uint64_t seed)
{
  if (n < 2)
  {
    throw NumericError(ErrorCode::InvalidArgument, "randomDemo: n must be >= 2");
  }
  Lcg64 rng(seed);
  ComplexMatrix q = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      q(i, j) += scale * rng.uniform();
    }
  }
  return q;
}

nlohmann::json describe(const OperatorConstants &c)
{
  return {{"gamma", c.gamma}, {"contNorm", c.contNorm}};
}

nlohmann::json describe(const ProblemInstance &problem)
{
  return {{"family", familyName(problem.family)},
          {"parameters", problem.parameters},
          {"dim", problem.op.dim()},
          {"constants", describe(problem.op.constants())},
          {"domain", problem.op.domain().label()},
          {"rangeDual", problem.op.rangeDual().label()}};
}

}  // namespace bpop
