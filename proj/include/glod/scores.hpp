#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace glod {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

/// Outlier scores (higher = more outlying) with ground truth.
struct ScoreVector {
  std::vector<double> scores;
  std::vector<bool> truth;
  std::string method;
  std::map<std::string, std::string> config;

  std::size_t size() const { return scores.size(); }

  std::string config_hash() const {
    std::string flat = method;
    for (const auto& [k, v] : config) flat += ";" + k + "=" + v;
    return hex64(fnv1a(flat));
  }
};

}  // namespace glod
