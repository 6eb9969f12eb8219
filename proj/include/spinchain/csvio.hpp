#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace spinchain {

// One named result table: a time column plus one value column per curve.
struct Table {
  std::string name;
  Eigen::VectorXd t;
  std::vector<std::pair<std::string, Eigen::VectorXd>> columns;
};

// Header row "t,<label>,...", values at full double precision (%.17g
// round-trips bit-exactly).
void emit_csv(const Table& table, const std::string& path);

Table parse_csv(const std::string& path);

}  // namespace spinchain
