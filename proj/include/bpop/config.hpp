// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

// Every tolerance and iteration cap used by the library lives here.
namespace bpop::config
{

// densela
inline constexpr double hermitianTol = 1e-12;       // relative symmetry check
inline constexpr double jacobiTol = 1e-15;          // off-diagonal rotation threshold
inline constexpr int jacobiMaxSweeps = 100;
inline constexpr int schurMaxIterationsPerRow = 60;
inline constexpr double eigenResidualTol = 1e-8;    // sigma_min(m - lambda I) / ||m||
inline constexpr double singularPivotTol = 1e-14;

// perturb
inline constexpr int entryDropBisectionSteps = 64;

// krylov
inline constexpr double reorthogonalizeTol = 1e-8;
inline constexpr double breakdownTol = 1e-14;
inline constexpr double crossCheckTol = 1e-10;

// fov
inline constexpr int fovSamples = 720;
inline constexpr double fovRefineTol = 1e-8;
inline constexpr int fovRefineMaxSteps = 200;
inline constexpr double hNormalTol = 1e-10;
inline constexpr double polygonDilation = 1e-6;

// bounds
inline constexpr double conditionBoundTol = 1e-8;   // absolute
inline constexpr double rateBoundTol = 1e-10;       // relative
inline constexpr double residualRatioTol = 1e-10;   // absolute, one-step FoV form
inline constexpr double coercivityTol = 1e-8;
inline constexpr double hIndependenceRatio = 1.05;
inline constexpr double strangOrderTol = 0.25;

// 64-bit linear congruential generator (Knuth MMIX constants)
inline constexpr std::uint64_t lcgMultiplier = 6364136223846793005ULL;
inline constexpr std::uint64_t lcgIncrement = 1442695040888963407ULL;

}  // namespace bpop::config
