#pragma once

#include <string>
#include <vector>

namespace potts::cli {

// Expands `--config FILE` (or `--config=FILE`) into command line options.
// The file holds `key = value` lines ('#' and ';' start comments, blank
// lines and `[section]` headers are ignored). A key becomes `--key=value`
// appended after the existing arguments unless `--key` was already given,
// so explicit flags win over the file and the file wins over defaults.
std::vector<std::string> expand_config(const std::vector<std::string> &args);

} // namespace potts::cli
