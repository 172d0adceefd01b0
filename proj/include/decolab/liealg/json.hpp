#ifndef DECOLAB_LIEALG_JSON_HPP
#define DECOLAB_LIEALG_JSON_HPP

// Algebra exchange format:
//   {"generators": ["H", ...],
//    "brackets": {"a,b": [{"gen": "H", "re_num": 0, "re_den": 1,
//                          "im_num": -1, "im_den": 1, "eps_pow": 0}, ...]}}
// Only nonzero brackets with a before b in generator order are written; a
// reversed key is read with the sign flipped. Integers too large for int64 are
// written as decimal strings.

#include "decolab/liealg/algebra.hpp"

#include <json.hpp>

#include <limits>
#include <stdexcept>
#include <string>

namespace decolab::liealg {

namespace detail {

inline nlohmann::json integer_json(const Integer &z) {
  if (z >= std::numeric_limits<long long>::min() && z <= std::numeric_limits<long long>::max())
    return static_cast<long long>(z);
  return z.str();
}

inline Integer integer_from_json(const nlohmann::json &j) {
  if (j.is_number_integer())
    return Integer(j.get<long long>());
  if (j.is_string())
    return Integer(j.get<std::string>());
  throw std::invalid_argument("algebra JSON: expected an integer");
}

inline Rational rational_from_json(const nlohmann::json &num, const nlohmann::json &den) {
  const Integer d = integer_from_json(den);
  if (d == 0)
    throw std::invalid_argument("algebra JSON: zero denominator");
  return Rational(integer_from_json(num), d);
}

} // namespace detail

inline nlohmann::json to_json(const LieAlgebra &alg) {
  nlohmann::json brackets = nlohmann::json::object();
  for (const auto &[key, val] : alg.table()) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[g, s] : val.terms())
      for (const auto &[pw, c] : s.terms())
        terms.push_back({{"gen", alg.generators()[g]},
                         {"re_num", detail::integer_json(numerator(c.re()))},
                         {"re_den", detail::integer_json(denominator(c.re()))},
                         {"im_num", detail::integer_json(numerator(c.im()))},
                         {"im_den", detail::integer_json(denominator(c.im()))},
                         {"eps_pow", pw}});
    brackets[alg.generators()[key.first] + "," + alg.generators()[key.second]] = std::move(terms);
  }
  return {{"generators", alg.generators()}, {"brackets", std::move(brackets)}};
}

inline LieAlgebra algebra_from_json(const nlohmann::json &j) {
  const auto gens = j.at("generators").get<std::vector<std::string>>();
  std::vector<BracketSpec> specs;
  if (j.contains("brackets")) {
    for (const auto &[key, terms] : j.at("brackets").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("algebra JSON: bracket key '" + key + "' must be \"a,b\"");
      BracketSpec spec{key.substr(0, comma), key.substr(comma + 1), {}};
      for (const auto &t : terms) {
        const GaussianRational c(detail::rational_from_json(t.at("re_num"), t.value("re_den", nlohmann::json(1))),
                                 detail::rational_from_json(t.value("im_num", nlohmann::json(0)),
                                                            t.value("im_den", nlohmann::json(1))));
        spec.result.emplace_back(t.at("gen").get<std::string>(), Scalar(c, t.value("eps_pow", 0)));
      }
      specs.push_back(std::move(spec));
    }
  }
  return LieAlgebra(gens, specs);
}

} // namespace decolab::liealg

#endif
