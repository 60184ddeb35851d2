#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cqg/types.hpp"

namespace cqg::detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline nlohmann::json complex_to_json(Complex z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline Complex json_to_complex(const nlohmann::json& j,
                               const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex values must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix json_to_matrix(const nlohmann::json& j,
                             const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where + ": matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError(where + ": matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = json_to_complex(j[r][c], where);
  }
  return m;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector json_to_vector(const nlohmann::json& j,
                             const std::string& where) {
  if (!j.is_array())
    throw ParseError(where + ": expected an array of complex values");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(i) = json_to_complex(j[i], where);
  return v;
}

inline nlohmann::json parse_document(const std::string& text,
                                     const std::string& format) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object");
  if (!doc.contains("format") || !doc["format"].is_string() ||
      doc["format"].get<std::string>() != format)
    throw ParseError("document format must be \"" + format + "\"");
  return doc;
}

}  // namespace cqg::detail
