#pragma once

#include <map>
#include <string>

#include "json.hpp"

namespace ncg {

// Result of one orchestrated run: a summary document plus the artifact files
// the caller should write out. CSV contents already carry the config-hash and
// seed header comment, so identical config + seed means byte-identical files.
struct SuiteResult {
  nlohmann::json summary;
  std::map<std::string, std::string> files;
};

// config must name a suite: flood-estimate | gossip-run | capacity-scan |
// lemma4-verify | sweep. Unknown keys anywhere in the config are rejected.
SuiteResult run_suite(const nlohmann::json& config);

// CSV column documentation per suite, for --schema.
std::string suite_schema();

}  // namespace ncg
