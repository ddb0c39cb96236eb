#include "fiberorient/coefficient_tables.hpp"

#include <map>
#include <sstream>

#include "embedded_tables.hpp"
#include "fiberorient/types.hpp"

namespace fo {
namespace {

std::vector<double> parse_row(const std::string& line) {
  std::istringstream is(line);
  std::vector<double> row;
  std::string tok;
  while (is >> tok) row.push_back(std::stod(tok));
  return row;
}

Eigen::MatrixXd to_terms(const std::vector<std::vector<double>>& rows, bool component_layout,
                         const std::string& stem) {
  if (rows.empty()) throw Error("coefficient table " + stem + ": empty block");
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != nc)
      throw Error("coefficient table " + stem + ": ragged row");
    for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = rows[i][j];
  }
  if (component_layout) m.transposeInPlace();
  if (m.cols() != 3) throw Error("coefficient table " + stem + ": expected three components");
  return m;
}

Eigen::MatrixXd canonical(const Eigen::MatrixXd& listed, const std::vector<int>& perm,
                          const std::string& stem) {
  if (static_cast<Eigen::Index>(perm.size()) != listed.rows())
    throw Error("coefficient table " + stem + ": permutation length mismatch");
  Eigen::MatrixXd c(3, listed.rows());
  for (std::size_t k = 0; k < perm.size(); ++k) c.col(k) = listed.row(perm[k] - 1).transpose();
  return c;
}

CoefficientTable parse(const char* stem, const char* text) {
  CoefficientTable t;
  t.stem = stem;
  std::istringstream is(text);
  std::string line;
  bool components = false;
  int block = 0;  // 0 header, 1 numerator, 2 denominator
  std::vector<std::vector<double>> num_rows, den_rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "name") {
      ls >> t.name;
    } else if (key == "order") {
      ls >> t.order;
    } else if (key == "rational") {
      std::string v;
      ls >> v;
      t.rational = v == "yes";
    } else if (key == "layout") {
      std::string v;
      ls >> v;
      components = v == "components";
    } else if (key == "permutation") {
      int p;
      auto& dst = block == 2 ? t.den_perm : t.num_perm;
      while (ls >> p) dst.push_back(p);
    } else if (key == "numerator") {
      block = 1;
    } else if (key == "denominator") {
      block = 2;
    } else if (key == "end") {
      break;
    } else {
      (block == 2 ? den_rows : num_rows).push_back(parse_row(line));
    }
  }
  t.num_listed = to_terms(num_rows, components, t.stem);
  t.num = canonical(t.num_listed, t.num_perm, t.stem);
  if (t.rational) {
    t.den_listed = to_terms(den_rows, components, t.stem);
    t.den = canonical(t.den_listed, t.den_perm, t.stem);
  }
  return t;
}

const std::map<std::string, CoefficientTable, std::less<>>& registry() {
  static const std::map<std::string, CoefficientTable, std::less<>> tables = [] {
    std::map<std::string, CoefficientTable, std::less<>> m;
    for (const auto& e : detail::embedded_tables()) {
      CoefficientTable t = parse(e.stem, e.text);
      m.emplace(t.name, std::move(t));
    }
    return m;
  }();
  return tables;
}

}  // namespace

const CoefficientTable& coefficient_table(std::string_view name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw UnknownKind("no coefficient table named " + std::string(name));
  return it->second;
}

std::vector<std::string> coefficient_table_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

std::string_view embedded_table_text(std::string_view stem) {
  for (const auto& e : detail::embedded_tables())
    if (stem == e.stem) return e.text;
  return {};
}

}  // namespace fo
