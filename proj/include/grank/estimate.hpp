#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "grank/graph.hpp"

namespace grank {

enum class Method { kPowerLaw, kUniform, kMetropolisHastings, kRandomWalk, kClosenessSigmoid };

inline constexpr Method kAllMethods[] = {Method::kPowerLaw, Method::kUniform,
                                         Method::kMetropolisHastings, Method::kRandomWalk,
                                         Method::kClosenessSigmoid};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kPowerLaw: return "pl";
    case Method::kUniform: return "us";
    case Method::kMetropolisHastings: return "mh";
    case Method::kRandomWalk: return "rw";
    case Method::kClosenessSigmoid: return "closeness-sigmoid";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

// Degree-rank methods estimate degree rank; the sigmoid estimates closeness rank.
inline bool is_degree_method(Method m) { return m != Method::kClosenessSigmoid; }

struct RankEstimate {
  NodeId node = 0;
  double value = 1.0;  // real-valued, within [1, n]
  Method method = Method::kPowerLaw;
  double sample_frac = 0.0;  // 0 for methods that do not sample
  std::uint64_t seed = 0;
};

inline double clamp_rank(double value, double n) {
  return std::clamp(value, 1.0, std::max(1.0, n));
}

}  // namespace grank
