#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fo {

// Parsed form of one embedded data file under core/data.
struct CoefficientTable {
  std::string stem;  // file name without extension
  std::string name;  // closure tag
  int order = 0;
  bool rational = false;
  // As listed in the file, one row per term, columns (A11, A22, A33).
  Eigen::MatrixXd num_listed, den_listed;
  std::vector<int> num_perm, den_perm;  // 1-based, canonical k <- listed perm[k]
  // Canonical order, 3 x terms.
  Eigen::MatrixXd num, den;
};

const CoefficientTable& coefficient_table(std::string_view name);
std::vector<std::string> coefficient_table_names();
// Raw embedded text of a data file, by stem. Empty if unknown.
std::string_view embedded_table_text(std::string_view stem);

}  // namespace fo
