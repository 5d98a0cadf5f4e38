// SPDX-License-Identifier: Apache-2.0
#include "bpop/fov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bpop
{

namespace
{

struct HermitianSplit
{
  ComplexMatrix re;  // (Q + Q^H) / 2
  ComplexMatrix im;  // (Q - Q^H) / 2i
};

HermitianSplit split(const ComplexMatrix &qhat)
{
  const ComplexMatrix adj = qhat.adjoint();
  return {(qhat + adj) / 2.0, (qhat - adj) / Complex(0.0, 2.0)};
}

double support(const HermitianSplit &s, const ComplexMatrix &qhat, double theta, Complex *point)
{
  ComplexMatrix h = std::cos(theta) * s.re + std::sin(theta) * s.im;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, point ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
  {
    throw NumericError(ErrorCode::NoConvergence, "fieldOfValues: Hermitian eigensolver failed");
  }
  const Index last = h.rows() - 1;  // ascending order
  if (point)
  {
    const ComplexVector x = eig.eigenvectors().col(last);
    *point = x.dot(qhat * x);
  }
  return eig.eigenvalues()(last);
}

ComplexMatrix similarity(const ComplexMatrix &q, const ComplexMatrix &gram)
{
  if (q.rows() != q.cols())
  {
    throw NumericError(ErrorCode::NonSquare, "fieldOfValues: matrix is not square");
  }
  if (gram.rows() != q.rows() || gram.cols() != q.cols())
  {
    throw NumericError(ErrorCode::DimensionMismatch, "fieldOfValues: Gram size differs from matrix size");
  }
  const DiscreteSpace h("fov", gram);
  return h.sqrtGram() * q * h.invSqrtGram();
}

double cross(Complex a, Complex b)
{
  return a.real() * b.imag() - a.imag() * b.real();
}

double wrapAngle(double t)
{
  constexpr double twoPi = 2.0 * std::numbers::pi;
  t = std::fmod(t, twoPi);
  return t < 0.0 ? t + twoPi : t;
}

}  // namespace

double supportFunction(const ComplexMatrix &qhat, double theta, Complex *boundaryPoint)
{
  return support(split(qhat), qhat, theta, boundaryPoint);
}

FovSample fieldOfValues(const ComplexMatrix &q, const ComplexMatrix &gram, int samples)
{
  if (samples < 16)
  {
    throw NumericError(ErrorCode::InvalidArgument, "fieldOfValues: at least 16 angle samples required");
  }
  const ComplexMatrix qhat = similarity(q, gram);
  const HermitianSplit parts = split(qhat);

  FovSample out;
  out.angles.resize(samples);
  out.supportValues.resize(samples);
  out.boundaryPoints.resize(samples);
  const double step = 2.0 * std::numbers::pi / samples;
  Index best = 0;
  for (int i = 0; i < samples; ++i)
  {
    const double theta = i * step;
    Complex z;
    out.angles(i) = theta;
    out.supportValues(i) = support(parts, qhat, theta, &z);
    out.boundaryPoints(i) = z;
    if (-out.supportValues(i) > -out.supportValues(best))
    {
      best = i;
    }
  }

  // Golden-section search for max(-h) on the bracket around the best sample.
  double lo = out.angles(best) - step;
  double hi = out.angles(best) + step;
  double bestValue = -out.supportValues(best);
  double bestAngle = out.angles(best);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = -support(parts, qhat, x1, nullptr);
  double f2 = -support(parts, qhat, x2, nullptr);
  for (int it = 0; it < config::fovRefineMaxSteps; ++it)
  {
    if (f1 > f2)
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = -support(parts, qhat, x1, nullptr);
    }
    else
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = -support(parts, qhat, x2, nullptr);
    }
    for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}})
    {
      if (f > bestValue)
      {
        bestValue = f;
        bestAngle = x;
      }
    }
    // Near a smooth maximum the value error is quadratic in the bracket
    // width, so this is far below the refinement tolerance.
    if (hi - lo < std::sqrt(config::fovRefineTol) * 1e-2)
    {
      break;
    }
  }
  out.bestAngle = wrapAngle(bestAngle);
  out.containsZero = !(bestValue > 0.0);
  out.vH = out.containsZero ? 0.0 : bestValue;
  return out;
}

bool isHNormal(const ComplexMatrix &q, const ComplexMatrix &gram, double tol)
{
  const DiscreteSpace h("hnormal", gram);
  const ComplexMatrix star = h.invGram() * q.adjoint() * gram;
  const double scale = norm2(q);
  return norm2(q * star - star * q) <= tol * scale * scale;
}

CoercivityReport coercivityCheck(const ComplexMatrix &q, const ComplexMatrix &gram)
{
  const FovSample f = fieldOfValues(q, gram);
  CoercivityReport r;
  r.vH = f.vH;
  r.elliptic = !f.containsZero;
  if (r.elliptic)
  {
    r.rotation = wrapAngle(std::numbers::pi - f.bestAngle);
    if (r.rotation > std::numbers::pi)
    {
      r.rotation -= 2.0 * std::numbers::pi;
    }
  }
  r.hNormal = isHNormal(q, gram);
  return r;
}

CoercivityReport coercivityCheck(const GalerkinOperator &op)
{
  requireSameSpace(op.domain(), op.rangeDual(), "coercivityCheck");
  return coercivityCheck(op.domain().invGram() * op.matrix(), op.domain().gram());
}

CarlemanDiagnostics carlemanDiagnostics(const ComplexMatrix &compactPart, const ComplexMatrix &massM,
                                        const ComplexMatrix &gram, double p)
{
  if (!(p >= 0.0))
  {
    throw NumericError(ErrorCode::InvalidArgument, "carlemanDiagnostics: p must be non-negative");
  }
  const ComplexMatrix mk = LuSolver<Complex>(massM).solve(compactPart);
  const DiscreteSpace h("carleman", gram);
  CarlemanDiagnostics out;
  out.p = p;
  out.singularValues = svd(h.sqrtGram() * mk * h.invSqrtGram()).singularValues;
  const Index n = out.singularValues.size();
  out.partialMeans.resize(n);
  double sum = 0.0;
  for (Index k = 0; k < n; ++k)
  {
    sum += out.singularValues(k);
    out.partialMeans(k) = sum / static_cast<double>(k + 1);
  }
  if (n == 0)
  {
    return out;
  }
  if (p > 0.0)
  {
    out.carlemanNorm = std::pow(out.singularValues.array().pow(p).sum(), 1.0 / p);
  }
  else
  {
    out.carlemanNorm = out.singularValues(0);
  }
  return out;
}

bool isConvexPolygon(const ComplexVector &points, double tol)
{
  const Index n = points.size();
  if (n < 3)
  {
    return true;
  }
  double scale = 0.0;
  for (Index i = 0; i < n; ++i)
  {
    scale = std::max(scale, std::abs(points(i)));
  }
  const double floor = -tol * std::max(scale * scale, 1e-300);
  for (Index i = 0; i < n; ++i)
  {
    const Complex a = points(i);
    const Complex b = points((i + 1) % n);
    const Complex c = points((i + 2) % n);
    if (cross(b - a, c - b) < floor)
    {
      return false;
    }
  }
  return true;
}

bool insideConvexPolygon(const ComplexVector &points, Complex z, double dilation)
{
  const Index n = points.size();
  if (n == 0)
  {
    return false;
  }
  double scale = 0.0, area = 0.0;
  for (Index i = 0; i < n; ++i)
  {
    scale = std::max(scale, std::abs(points(i)));
    area += cross(points(i), points((i + 1) % n));
  }
  if (std::abs(area) <= 1e-12 * std::max(scale * scale, 1e-300))
  {
    // Degenerate hull: a segment or a point. Use its two extreme points.
    Index a = 0, b = 0;
    for (Index i = 0; i < n; ++i)
    {
      for (Index j = i + 1; j < n; ++j)
      {
        if (std::abs(points(i) - points(j)) > std::abs(points(a) - points(b)))
        {
          a = i;
          b = j;
        }
      }
    }
    const Complex d = points(b) - points(a);
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? (std::conj(d) * (z - points(a))).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (points(a) + t * d)) <= dilation;
  }
  for (Index i = 0; i < n; ++i)
  {
    const Complex a = points(i);
    const Complex b = points((i + 1) % n);
    const double len = std::abs(b - a);
    if (len == 0.0)
    {
      continue;
    }
    if (cross(b - a, z - a) / len < -dilation)
    {
      return false;
    }
  }
  return true;
}

double hausdorffDistance(const ComplexVector &a, const ComplexVector &b)
{
  auto directed = [](const ComplexVector &x, const ComplexVector &y) {
    double worst = 0.0;
    for (Index i = 0; i < x.size(); ++i)
    {
      double nearest = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < y.size(); ++j)
      {
        nearest = std::min(nearest, std::abs(x(i) - y(j)));
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

ComplexVector convexHull(const ComplexVector &points)
{
  std::vector<Complex> pts(points.data(), points.data() + points.size());
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3)
  {
    return Eigen::Map<ComplexVector>(pts.data(), static_cast<Index>(pts.size()));
  }
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
    {
      --k;
    }
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;)
  {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
    {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return Eigen::Map<ComplexVector>(hull.data(), static_cast<Index>(hull.size()));
}

SpectralPicture spectralPicture(const ComplexMatrix &q, int samples)
{
  const auto eig = generalEigen(q);
  if (!eig.converged)
  {
    throw NumericError(ErrorCode::NoConvergence, "spectralPicture: eigenvalue iteration cap reached");
  }
  SpectralPicture out;
  out.eigenvalues = eig.eigenvalues;
  const double lmin = std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1));
  out.kappaS = lmin > 0.0 ? std::abs(eig.eigenvalues(0)) / lmin : std::numeric_limits<double>::infinity();
  out.kappa2 = conditionNumber2(q);
  out.fov = fieldOfValues(q, ComplexMatrix::Identity(q.rows(), q.cols()), samples);
  out.zeroInFov = out.fov.containsZero;
  out.fovDistance = out.fov.vH;
  out.zeroInSpectrumHull = insideConvexPolygon(convexHull(eig.eigenvalues), Complex(0.0, 0.0), 0.0);
  return out;
}

}  // namespace bpop
