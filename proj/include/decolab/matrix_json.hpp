#ifndef DECOLAB_MATRIX_JSON_HPP
#define DECOLAB_MATRIX_JSON_HPP

// Matrix exchange format:
//   {"sig": [2, 2], "rows": [[[re, im], [re, im], ...], ...]}
// A bare array of rows is also accepted on input; its signature is then the
// single factor [side].

#include "decolab/qcore.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

namespace decolab::qcore {

inline nlohmann::json to_json(const Operator &op) {
  nlohmann::json rows = nlohmann::json::array();
  const auto &m = op.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"sig", op.sig().factors()}, {"rows", std::move(rows)}};
}

inline Operator operator_from_json(const nlohmann::json &j) {
  const nlohmann::json &rows = j.is_array() ? j : j.at("rows");
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("matrix JSON: rows must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw std::invalid_argument("matrix JSON: row " + std::to_string(i) + " must have " +
                                  std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto &e = row[static_cast<std::size_t>(k)];
      if (e.is_number())
        m(i, k) = cplx(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2)
        m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
      else
        throw std::invalid_argument("matrix JSON: entry (" + std::to_string(i) + "," +
                                    std::to_string(k) + ") must be [re, im]");
    }
  }
  if (j.is_object() && j.contains("sig"))
    return Operator(std::move(m), DimSignature(j.at("sig").get<std::vector<std::size_t>>()));
  return Operator(std::move(m));
}

inline Operator load_operator(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open matrix file " + path);
  return operator_from_json(nlohmann::json::parse(in));
}

} // namespace decolab::qcore

#endif
