// SPDX-License-Identifier: Apache-2.0
#include "bpop/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bpop::io
{

namespace
{

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string &what)
{
  throw NumericError(ErrorCode::Io, what);
}

std::ofstream openOut(const std::filesystem::path &path)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path);
  if (!os)
  {
    fail("cannot open " + path.string() + " for writing");
  }
  return os;
}

std::ifstream openIn(const std::filesystem::path &path)
{
  std::ifstream is(path);
  if (!is)
  {
    fail("cannot open " + path.string());
  }
  return is;
}

bool nextDataLine(std::istream &is, std::string &line)
{
  while (std::getline(is, line))
  {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%')
    {
      continue;
    }
    return true;
  }
  return false;
}

void dumpValue(std::string &out, const nlohmann::json &v, int indent, int depth)
{
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (pretty)
    {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (v.type())
  {
    case nlohmann::json::value_t::object:
    {
      if (v.empty())
      {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it)
      {
        if (!first)
        {
          out += ',';
        }
        first = false;
        newline(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += pretty ? ": " : ":";
        dumpValue(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array:
    {
      if (v.empty())
      {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      const bool flat = std::all_of(v.begin(), v.end(), [](const auto &e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto &e : v)
      {
        if (!first)
        {
          out += flat && pretty ? ", " : ",";
        }
        first = false;
        if (!flat)
        {
          newline(depth + 1);
        }
        dumpValue(out, e, indent, depth + 1);
      }
      if (!flat)
      {
        newline(depth);
      }
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
    {
      const double x = v.get<double>();
      out += std::isfinite(x) ? formatDouble(x) : "null";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string formatDouble(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void writeMatrixMarket(std::ostream &os, const ComplexMatrix &m, MatrixSymmetry symmetry)
{
  const bool herm = symmetry == MatrixSymmetry::Hermitian;
  if (herm && !isHermitian(m))
  {
    throw NumericError(ErrorCode::NonHermitian, "writeMatrixMarket: hermitian storage requested");
  }
  os << "%%MatrixMarket matrix array complex " << (herm ? "hermitian" : "general") << '\n';
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
  {
    for (Index i = herm ? j : 0; i < m.rows(); ++i)
    {
      os << formatDouble(m(i, j).real()) << ' ' << formatDouble(m(i, j).imag()) << '\n';
    }
  }
}

void writeMatrixMarket(const std::filesystem::path &path, const ComplexMatrix &m, MatrixSymmetry symmetry)
{
  auto os = openOut(path);
  writeMatrixMarket(os, m, symmetry);
}

ComplexMatrix readMatrixMarket(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line))
  {
    fail("readMatrixMarket: empty input");
  }
  std::istringstream header(lower(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
  {
    fail("readMatrixMarket: missing %%MatrixMarket matrix banner");
  }
  if (format != "array" && format != "coordinate")
  {
    fail("readMatrixMarket: unsupported format '" + format + "'");
  }
  if (field != "real" && field != "complex" && field != "integer" && field != "double")
  {
    fail("readMatrixMarket: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian")
  {
    fail("readMatrixMarket: unsupported symmetry '" + symmetry + "'");
  }
  const bool complexField = field == "complex";
  const bool coordinate = format == "coordinate";

  if (!nextDataLine(is, line))
  {
    fail("readMatrixMarket: missing size line");
  }
  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  sizes >> rows >> cols;
  if (coordinate)
  {
    sizes >> nnz;
  }
  if (!sizes || rows < 0 || cols < 0)
  {
    fail("readMatrixMarket: malformed size line");
  }
  if (symmetry != "general" && rows != cols)
  {
    fail("readMatrixMarket: symmetric storage needs a square matrix");
  }

  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  auto place = [&](long i, long j, Complex z) {
    if (i < 0 || j < 0 || i >= rows || j >= cols)
    {
      fail("readMatrixMarket: entry index out of range");
    }
    m(i, j) = z;
    if (i != j)
    {
      if (symmetry == "symmetric")
      {
        m(j, i) = z;
      }
      else if (symmetry == "hermitian")
      {
        m(j, i) = std::conj(z);
      }
    }
  };
  auto readValue = [&](std::istringstream &ls) {
    double re = 0.0, im = 0.0;
    ls >> re;
    if (complexField)
    {
      ls >> im;
    }
    if (!ls)
    {
      fail("readMatrixMarket: malformed entry '" + line + "'");
    }
    return Complex(re, im);
  };

  if (coordinate)
  {
    for (long k = 0; k < nnz; ++k)
    {
      if (!nextDataLine(is, line))
      {
        fail("readMatrixMarket: fewer entries than declared");
      }
      std::istringstream ls(line);
      long i = 0, j = 0;
      ls >> i >> j;
      place(i - 1, j - 1, readValue(ls));
    }
  }
  else
  {
    const bool packed = symmetry != "general";
    for (long j = 0; j < cols; ++j)
    {
      for (long i = packed ? j : 0; i < rows; ++i)
      {
        if (!nextDataLine(is, line))
        {
          fail("readMatrixMarket: fewer entries than declared");
        }
        std::istringstream ls(line);
        place(i, j, readValue(ls));
      }
    }
  }
  if (!m.allFinite())
  {
    fail("readMatrixMarket: non-finite entry");
  }
  return m;
}

ComplexMatrix readMatrixMarket(const std::filesystem::path &path)
{
  auto is = openIn(path);
  return readMatrixMarket(is);
}

void writeVectorCsv(std::ostream &os, const ComplexVector &v)
{
  os << "index,re,im\n";
  for (Index i = 0; i < v.size(); ++i)
  {
    os << i << ',' << formatDouble(v(i).real()) << ',' << formatDouble(v(i).imag()) << '\n';
  }
}

void writeVectorCsv(const std::filesystem::path &path, const ComplexVector &v)
{
  auto os = openOut(path);
  writeVectorCsv(os, v);
}

ComplexVector readVectorCsv(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line) || lower(line).rfind("index", 0) != 0)
  {
    fail("readVectorCsv: missing 'index,re,im' header");
  }
  std::vector<Complex> values;
  while (std::getline(is, line))
  {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long index = 0;
    double re = 0.0, im = 0.0;
    ls >> index >> re >> im;
    if (!ls || index != static_cast<long>(values.size()))
    {
      fail("readVectorCsv: malformed row '" + line + "'");
    }
    values.emplace_back(re, im);
  }
  return Eigen::Map<ComplexVector>(values.data(), static_cast<Index>(values.size()));
}

ComplexVector readVectorCsv(const std::filesystem::path &path)
{
  auto is = openIn(path);
  return readVectorCsv(is);
}

std::string dumpJson(const nlohmann::json &value, int indent)
{
  std::string out;
  dumpValue(out, value, indent, 0);
  out += '\n';
  return out;
}

void writeJson(const std::filesystem::path &path, const nlohmann::json &value)
{
  auto os = openOut(path);
  os << dumpJson(value);
}

}  // namespace bpop::io
