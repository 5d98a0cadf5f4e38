// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "bpop/problems.hpp"

namespace bpop
{

// Sampled H-field of values F_H(Q) = F_2(H^{1/2} Q H^{-1/2}).
struct FovSample
{
  RealVector angles;          // uniform in [0, 2 pi)
  RealVector supportValues;   // h(theta) = lambda_max(Herm(e^{-i theta} Qhat))
  ComplexVector boundaryPoints;
  double vH = 0.0;            // distance of F_H(Q) from the origin
  bool containsZero = false;
  double bestAngle = 0.0;     // maximizer of -h(theta)
};

FovSample fieldOfValues(const ComplexMatrix &q, const ComplexMatrix &gram, int samples = config::fovSamples);

// Support function of F_2(qhat) in direction theta, with its maximizing
// boundary point.
double supportFunction(const ComplexMatrix &qhat, double theta, Complex *boundaryPoint = nullptr);

struct CoercivityReport
{
  double vH = 0.0;
  bool elliptic = false;
  // Rotation e^{i rotation} that moves the FoV into the right half-plane.
  double rotation = 0.0;
  bool hNormal = false;
};

CoercivityReport coercivityCheck(const ComplexMatrix &q, const ComplexMatrix &gram);
// Coercivity of the form itself: F_H(H^{-1} A) = {u^H A u / u^H H u}.
CoercivityReport coercivityCheck(const GalerkinOperator &op);

// ||Q Q* - Q* Q||_2 <= tol ||Q||_2^2 with Q* = H^{-1} Q^H H.
bool isHNormal(const ComplexMatrix &q, const ComplexMatrix &gram, double tol = config::hNormalTol);

struct CarlemanDiagnostics
{
  RealVector singularValues;  // of M^{-1} K in the H geometry
  RealVector partialMeans;    // partialMeans(k-1) = mean of the first k
  double carlemanNorm = 0.0;  // (sum sigma^p)^{1/p}; sigma_1 for p = 0
  double p = 0.0;
};

CarlemanDiagnostics carlemanDiagnostics(const ComplexMatrix &compactPart, const ComplexMatrix &massM,
                                        const ComplexMatrix &gram, double p);

// Convex polygon helpers over boundary samples in angle order.
bool isConvexPolygon(const ComplexVector &points, double tol = 1e-10);
bool insideConvexPolygon(const ComplexVector &points, Complex z, double dilation = config::polygonDilation);
double hausdorffDistance(const ComplexVector &a, const ComplexVector &b);

// Counter-clockwise convex hull (monotone chain); collinear points dropped.
ComplexVector convexHull(const ComplexVector &points);

// Euclidean picture of a non-normal matrix: condition numbers, the origin
// against F_2(Q) and against the convex hull of the spectrum.
struct SpectralPicture
{
  double kappa2 = 0.0;
  double kappaS = 0.0;
  bool zeroInFov = false;
  bool zeroInSpectrumHull = false;
  double fovDistance = 0.0;  // V_2(Q)
  ComplexVector eigenvalues;
  FovSample fov;
};

SpectralPicture spectralPicture(const ComplexMatrix &q, int samples = config::fovSamples);

}  // namespace bpop
