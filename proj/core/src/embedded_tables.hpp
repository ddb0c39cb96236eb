#pragma once

#include <vector>

namespace fo::detail {

struct EmbeddedTable {
  const char* stem;
  const char* text;
};

const std::vector<EmbeddedTable>& embedded_tables();

}  // namespace fo::detail
