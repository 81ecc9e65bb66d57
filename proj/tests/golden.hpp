#pragma once

// Golden-file comparison. Set AGENTOPT_REGEN_GOLDEN=1 to rewrite the pinned
// files instead of checking against them.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace golden {

inline std::string path_for(const std::string& name) {
  return std::string(AGENTOPT_TEST_DATA_DIR) + "/golden/" + name;
}

inline void compare(const std::string& name, const std::string& actual) {
  const std::string path = path_for(name);
  if (std::getenv("AGENTOPT_REGEN_GOLDEN") != nullptr) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << actual;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file ", path,
                  " (set AGENTOPT_REGEN_GOLDEN=1 to create)");
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK_MESSAGE(ss.str() == actual, "output differs from golden file ", name);
}

}  // namespace golden
