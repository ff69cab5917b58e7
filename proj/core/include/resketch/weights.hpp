#pragma once

#include <string>
#include <unordered_map>

namespace resketch {

// Sparse feature weights; absent means zero. Serialized as sorted
// `feature TAB value` lines so files diff cleanly.
struct Weights {
  std::unordered_map<std::string, double> w;

  double get(const std::string& name) const {
    auto it = w.find(name);
    return it == w.end() ? 0.0 : it->second;
  }
  void add(const std::string& name, double delta) {
    if (delta != 0.0) w[name] += delta;
  }

  void save(const std::string& path) const;
  static Weights load(const std::string& path);  // std::runtime_error on open failure
};

}  // namespace resketch
