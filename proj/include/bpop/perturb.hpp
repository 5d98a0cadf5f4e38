// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "bpop/problems.hpp"

namespace bpop
{

enum class PerturbationMode
{
  DenseRandom,
  SvdTruncation,
  EntryDrop
};

std::string modeName(PerturbationMode mode);
PerturbationMode parseMode(const std::string &name);

struct PerturbationSpec
{
  double level = 0.0;  // nu in [0, 1)
  PerturbationMode mode = PerturbationMode::DenseRandom;
  std::uint64_t seed = 1;
};

struct PerturbationMeasure
{
  double nuActual = 0.0;
};

struct PerturbedOperator
{
  GalerkinOperator op;
  PerturbationMeasure measure;
  // Set when no admissible truncation exists; op is then an exact copy.
  bool truncationInfeasible = false;
};

void validate(const PerturbationSpec &spec);

// A_nu with ||H_Y^{-1/2}(A - A_nu)H_X^{-1/2}||_2 <= nu * gamma_A.
//
// denseRandom draws a complex matrix from Lcg64(seed) and rescales it so the
// bound is attained. If A is Hermitian with domain = range dual the draw is
// symmetrized so that A_nu stays Hermitian. svdTruncation drops the smallest
// singular values of the normalized operator while the budget allows;
// entryDrop zeroes the smallest-magnitude entries.
PerturbedOperator perturbOperator(const GalerkinOperator &op, const PerturbationSpec &spec);

// b_nu with ||H_Y^{-1/2}(b - b_nu)||_2 = nu ||H_Y^{-1/2} b||_2.
ComplexVector perturbRhs(const ComplexVector &b, const DiscreteSpace &rangeDual, double nu, std::uint64_t seed);

// sigma_max(H_Y^{-1/2}(A - A_nu)H_X^{-1/2}) / gamma_A
PerturbationMeasure measurePerturbation(const GalerkinOperator &original, const GalerkinOperator &perturbed);

// ||H_Y^{-1/2}(b - b_nu)|| / ||H_Y^{-1/2} b||, zero for b = 0.
double measureRhsPerturbation(const ComplexVector &b, const ComplexVector &bNu, const DiscreteSpace &rangeDual);

}  // namespace bpop
