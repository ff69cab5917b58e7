#include "resketch/weights.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace resketch {

void Weights::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write weights file: " + path);
  std::map<std::string, double> sorted(w.begin(), w.end());
  out.precision(17);
  for (const auto& [name, value] : sorted) out << name << '\t' << value << '\n';
}

Weights Weights::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  Weights out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("weights line " + std::to_string(lineno) + " has no tab");
    out.w[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
  }
  return out;
}

}  // namespace resketch
