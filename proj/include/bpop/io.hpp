// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bpop/densela.hpp"

namespace bpop::io
{

enum class MatrixSymmetry
{
  General,
  Hermitian
};

// Array format, complex field, 17 significant digits. Hermitian storage
// writes the lower triangle only.
void writeMatrixMarket(std::ostream &os, const ComplexMatrix &m,
                       MatrixSymmetry symmetry = MatrixSymmetry::General);
void writeMatrixMarket(const std::filesystem::path &path, const ComplexMatrix &m,
                       MatrixSymmetry symmetry = MatrixSymmetry::General);

// Accepts array and coordinate formats; real, integer and complex fields;
// general, symmetric and hermitian storage.
ComplexMatrix readMatrixMarket(std::istream &is);
ComplexMatrix readMatrixMarket(const std::filesystem::path &path);

// "index,re,im" header, one row per entry.
void writeVectorCsv(std::ostream &os, const ComplexVector &v);
void writeVectorCsv(const std::filesystem::path &path, const ComplexVector &v);
ComplexVector readVectorCsv(std::istream &is);
ComplexVector readVectorCsv(const std::filesystem::path &path);

// Deterministic JSON text: sorted keys, %.17g numbers, non-finite as null.
std::string dumpJson(const nlohmann::json &value, int indent = 2);
void writeJson(const std::filesystem::path &path, const nlohmann::json &value);

std::string formatDouble(double x);

}  // namespace bpop::io
