// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpop/opprec.hpp"

namespace bpop
{

enum class Method
{
  Gmres,
  WeightedGmres,
  Cg
};

std::string methodName(Method method);
Method parseMethod(const std::string &name);

struct SolveConfig
{
  Method method = Method::WeightedGmres;
  std::optional<int> restart;  // GMRES(m); none means full GMRES
  double tol = 1e-10;          // relative to the initial residual (or error, for CG)
  int maxIter = 200;
  std::optional<ComplexMatrix> weightGram;  // H of the weighted norm; Euclidean if empty
};

// norms[k] = ||P r_k|| in the configured norm, k = 0..iterations.
struct ResidualHistory
{
  std::vector<double> norms;
  std::vector<double> rates;  // rates[k] = (norms[k]/norms[0])^{1/k}, rates[0] = 1
  bool converged = false;
  int iterations = 0;
  std::optional<int> restart;
  std::vector<ComplexVector> iterates;   // x_k
  std::vector<ComplexVector> residuals;  // P(b - A x_k), recomputed from x_k
};

struct CgErrorHistory
{
  std::vector<double> aNormErrors;  // ||u - x_k||_{A_nu}
  std::vector<double> rates;        // (e_k / e_0)^{1/k}
  bool converged = false;
  int iterations = 0;
};

template <typename History>
struct SolveResult
{
  ComplexVector x;
  History history;
};

using LinearOperator = std::function<ComplexVector(const ComplexVector &)>;

void validate(const SolveConfig &cfg, Index dim);

// GMRES(m) for q(x) = rhs from x0 = 0, minimizing ||rhs - q x||_H with the
// Arnoldi process carried out in (u, v)_H = v^H H u.
SolveResult<ResidualHistory> gmres(const LinearOperator &q, const ComplexVector &rhs, const SolveConfig &cfg);

// P_mu A_nu x = P_mu b_nu through the matrix-free chain.
SolveResult<ResidualHistory> gmresSolve(const PreconditionedSystem &sys, const SolveConfig &cfg);

// Preconditioned CG on A_nu x = b_nu with preconditioner P_mu; errors are
// measured against a direct solve.
SolveResult<CgErrorHistory> pcg(const ComplexMatrix &a, const ComplexVector &b, const LinearOperator &prec,
                                const SolveConfig &cfg);
SolveResult<CgErrorHistory> cgSolve(const PreconditionedSystem &sys, const SolveConfig &cfg);

struct CrossCheckStep
{
  int k = 0;
  double euclidOfEuclid = 0.0;    // ||P r~_k||_2
  double euclidOfWeighted = 0.0;  // ||P r_k||_2
  double weightedOfWeighted = 0.0;
  double weightedOfEuclid = 0.0;
  bool holds = true;
};

struct CrossCheckReport
{
  std::vector<CrossCheckStep> steps;
  bool allHold = true;
  int checkedUpTo = 0;
};

// ||P r~_k||_2 <= ||P r_k||_2 and ||P r_k||_H <= ||P r~_k||_H per k, where
// r~ comes from the Euclidean run and r from the H-weighted run. Only the
// first restart cycle is compared, where both are minimizers over the
// same Krylov space.
CrossCheckReport residualCrossCheck(const ResidualHistory &histEuclid, const ResidualHistory &histWeighted,
                                    const ComplexMatrix &gram);

void writeHistoryCsv(std::ostream &os, const ResidualHistory &history, const std::vector<double> &bound = {});
nlohmann::json describe(const ResidualHistory &history);
nlohmann::json describe(const CgErrorHistory &history);

}  // namespace bpop
