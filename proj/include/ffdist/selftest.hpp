#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ffdist {

struct SelftestCheck {
  std::string module;
  std::string name;
  bool passed;
};

/// Tiny oracle suite of one module: ffcore, sets, spectra, energy,
/// incidence, encodings or verify. Throws UsageError for other names.
std::vector<SelftestCheck> run_selftest(std::string_view module);

}  // namespace ffdist
