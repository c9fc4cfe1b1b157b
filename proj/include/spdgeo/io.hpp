#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdgeo/error.hpp"
#include "spdgeo/matcore.hpp"

namespace spdgeo {

/// Matrix JSON: {"n": N, "complex": bool, "data": [[re, im], ...]} with
/// row-major entries. Real matrices may also list plain numbers.
/// Output always carries 17 significant digits so that reading back is exact.

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline CMatrix parse_entries(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("data"))
    throw ParseError("matrix JSON needs fields 'n' and 'data'");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw ParseError("matrix JSON field 'n' must be a positive integer");
  const auto n = static_cast<Index>(j["n"].get<long long>());
  const bool is_complex = j.value("complex", true);
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != static_cast<std::size_t>(n * n))
    throw ParseError("matrix JSON 'data' must hold n*n entries");
  CMatrix m(n, n);
  for (Index k = 0; k < n * n; ++k) {
    const auto& e = data[static_cast<std::size_t>(k)];
    double re = 0.0, im = 0.0;
    if (e.is_number()) {
      re = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      re = e[0].get<double>();
      im = e[1].get<double>();
    } else {
      throw ParseError("matrix entry " + std::to_string(k) + " is not a number or [re, im] pair");
    }
    if (!is_complex && im != 0.0) throw ParseError("real matrix has a nonzero imaginary part");
    m(k / n, k % n) = Complex(re, im);
  }
  return m;
}

}  // namespace detail

inline std::string matrix_to_json(const CMatrix& m) {
  bool is_complex = false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j).imag() != 0.0) is_complex = true;
  std::string s = "{\"n\":" + std::to_string(m.rows()) + ",\"complex\":" + (is_complex ? "true" : "false") +
                  ",\"data\":[";
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (i || j) s += ',';
      s += '[' + detail::fmt17(m(i, j).real()) + ',' + detail::fmt17(m(i, j).imag()) + ']';
    }
  return s + "]}";
}

inline std::string matrix_to_json(const HermitianMatrix& m) { return matrix_to_json(m.matrix()); }

inline CMatrix matrix_from_json(const nlohmann::json& j) { return detail::parse_entries(j); }

inline CMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return detail::parse_entries(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ParseError("write to '" + path + "' failed");
}

/// Matrices stored in a file: a single matrix object or an array of them.
inline std::vector<CMatrix> read_matrices(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
  std::vector<CMatrix> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(detail::parse_entries(e));
  } else {
    out.push_back(detail::parse_entries(j));
  }
  if (out.empty()) throw ParseError("'" + path + "' holds no matrices");
  return out;
}

inline HermitianMatrix read_hermitian(const std::string& path) {
  const auto all = read_matrices(path);
  if (all.size() != 1) throw ParseError("'" + path + "' must hold exactly one matrix");
  return HermitianMatrix(all.front());
}

/// Loads a matrix and re-checks that it is Hermitian positive definite.
inline SpdMatrix read_spd(const std::string& path) {
  try {
    return SpdMatrix(read_hermitian(path));
  } catch (const DomainError& e) {
    throw DomainError("'" + path + "': " + e.what());
  }
}

}  // namespace spdgeo
