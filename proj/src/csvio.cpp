#include "spinchain/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinchain {

void emit_csv(const Table& table, const std::string& path) {
  if (table.t.size() == 0)
    throw std::invalid_argument("emit_csv: empty time grid, refusing to write " + path);
  if (table.columns.empty())
    throw std::invalid_argument("emit_csv: table has no curves");
  for (const auto& [label, v] : table.columns)
    if (v.size() != table.t.size())
      throw std::invalid_argument("emit_csv: column '" + label + "' length mismatch");

  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
  std::fprintf(f, "t");
  for (const auto& [label, v] : table.columns) std::fprintf(f, ",%s", label.c_str());
  std::fprintf(f, "\n");
  for (Eigen::Index i = 0; i < table.t.size(); ++i) {
    std::fprintf(f, "%.17g", table.t[i]);
    for (const auto& [label, v] : table.columns) std::fprintf(f, ",%.17g", v[i]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

Table parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty file");

  Table table;
  table.name = path;
  std::vector<std::string> labels;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) labels.push_back(cell);
  }
  if (labels.empty() || labels[0] != "t")
    throw std::runtime_error("parse_csv: missing time header");

  std::vector<std::vector<double>> cols(labels.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= cols.size()) throw std::runtime_error("parse_csv: ragged row");
      cols[k++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (k != cols.size()) throw std::runtime_error("parse_csv: ragged row");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(cols[0].size());
  table.t = Eigen::Map<Eigen::VectorXd>(cols[0].data(), n);
  for (std::size_t c = 1; c < cols.size(); ++c)
    table.columns.emplace_back(labels[c], Eigen::Map<Eigen::VectorXd>(cols[c].data(), n));
  return table;
}

}  // namespace spinchain
