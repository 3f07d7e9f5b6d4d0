#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace golden {

/// Rows of a CSV file under the golden directory, header skipped.
inline std::vector<std::vector<std::string>> rows(const std::string& name) {
  std::ifstream in(std::string(SHARPMULT_GOLDEN_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::vector<std::vector<std::string>> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

/// name,value table.
inline std::map<std::string, double> values(const std::string& name) {
  std::map<std::string, double> out;
  for (const auto& r : rows(name)) out[r.at(0)] = std::stod(r.at(1));
  return out;
}

}  // namespace golden
