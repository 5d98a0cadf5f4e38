// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "bpop/spaces.hpp"

namespace bpop
{

struct OperatorConstants
{
  double gamma = 0.0;     // discrete inf-sup constant
  double contNorm = 0.0;  // discrete continuity constant
};

// Galerkin matrix of a sesquilinear form X_h x Y_h -> C. Rows index the
// test space (range dual), columns the trial space (domain).
class GalerkinOperator
{
public:
  GalerkinOperator(ComplexMatrix matrix, DiscreteSpace domain, DiscreteSpace rangeDual);

  const ComplexMatrix &matrix() const { return matrix_; }
  const DiscreteSpace &domain() const { return domain_; }
  const DiscreteSpace &rangeDual() const { return rangeDual_; }
  const OperatorConstants &constants() const { return constants_; }
  double gamma() const { return constants_.gamma; }
  double contNorm() const { return constants_.contNorm; }
  // BNB condition number ||a|| / gamma
  double kA() const { return constants_.contNorm / constants_.gamma; }
  Index dim() const { return matrix_.rows(); }

  // H_Y^{-1/2} A H_X^{-1/2}, whose singular values carry the constants.
  ComplexMatrix normalized() const;

  GalerkinOperator withMatrix(ComplexMatrix matrix) const;

private:
  ComplexMatrix matrix_;
  DiscreteSpace domain_;
  DiscreteSpace rangeDual_;
  OperatorConstants constants_;
};

OperatorConstants computeConstants(const ComplexMatrix &matrix, const DiscreteSpace &domain,
                                   const DiscreteSpace &rangeDual);

enum class Family
{
  Circle,
  Fredholm,
  Graded,
  Random,
  Custom
};

std::string familyName(Family family);
Family parseFamily(const std::string &name);

struct ProblemInstance
{
  GalerkinOperator op;
  ComplexVector rhs;
  Family family = Family::Custom;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<ComplexVector> exactCoeffs;
  // K := A - N, with N the pairing matrix stored in identityPart.
  std::optional<ComplexMatrix> compactPart;
  std::optional<ComplexMatrix> identityPart;
  std::optional<double> carlemanIndex;
};

// C: V_h -> W_h', M: X_h -> W_h', N: V_h -> Y_h', realizing P = M^{-1} C N^{-1}.
class PreconditionerSet
{
public:
  PreconditionerSet(GalerkinOperator c, GalerkinOperator m, GalerkinOperator n, bool bubnovGalerkin = false);

  const GalerkinOperator &c() const { return c_; }
  const GalerkinOperator &m() const { return m_; }
  const GalerkinOperator &n() const { return n_; }
  bool bubnovGalerkin() const { return bubnovGalerkin_; }

  const DiscreteSpace &trialSpace() const { return m_.domain(); }      // X_h
  const DiscreteSpace &testSpace() const { return n_.rangeDual(); }    // Y_h

  // N C^{-1} M; present only for the Bubnov-Galerkin specialization, where
  // it is validated Hermitian positive definite.
  const std::optional<ComplexMatrix> &pinvGram() const { return pinvGram_; }

  PreconditionerSet withC(GalerkinOperator c) const;

  // Throws SpaceMismatch unless A: X_h -> Y_h' matches the chain.
  void requireCompatible(const GalerkinOperator &a) const;

private:
  GalerkinOperator c_;
  GalerkinOperator m_;
  GalerkinOperator n_;
  bool bubnovGalerkin_ = false;
  std::optional<ComplexMatrix> pinvGram_;
};

struct CircleContinuumConstants
{
  double gammaA = 0.0;
  double normA = 0.0;
};

// Fourier Galerkin model of opposite-order preconditioning on the circle:
// hypersingular symbol max(|k|, c0)/2 preconditioned by the single-layer
// symbol, on modes k = -K..K.
std::pair<ProblemInstance, PreconditionerSet> circleFourier(int modes, double radius = 0.5, double c0 = 0.5);

// Inf-sup and continuity constants of the hypersingular symbol over all k.
CircleContinuumConstants circleContinuumConstants(double c0);

// Exact coefficients u_k = b_k / w_k for |k| <= modes.
ComplexVector circleExactCoefficients(int modes, double c0 = 0.5);

// Index of mode k in the coefficient vector of a level with the given modes.
inline Index circleModeIndex(int modes, int k) { return static_cast<Index>(k + modes); }

// Piecewise-constant Galerkin scheme for u + Ku = 1 on [0,1] with Gaussian
// kernel kernelScale * exp(-(s-t)^2 / width^2).
std::pair<ProblemInstance, PreconditionerSet> fredholmSecondKind(int n, double kernelWidth,
                                                                 double kernelScale = 1.0);

// P1 nodal basis on nodes (i/n)^grading: (L^2 mass Gram, H^1 Gram).
std::pair<DiscreteSpace, DiscreteSpace> gradedMass(int n, double grading);

// I + scale * E with E uniform on [0,1), filled row by row from Lcg64(seed).
ComplexMatrix randomDemo(int n, double scale, std::uint64_t seed);

nlohmann::json describe(const ProblemInstance &problem);
nlohmann::json describe(const OperatorConstants &c);

}  // namespace bpop
