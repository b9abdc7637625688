#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "ffdist/encodings.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/spectrum.hpp"
#include "ffdist/verify.hpp"

namespace ffdist {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "ffdist";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Exact integers are written as decimal strings; ratios as JSON numbers,
// with non-finite values written as null.
Json to_json(const BigCount& v);
Json to_json(const FieldSubset& a);
Json to_json(const Spectrum& s);
Json to_json(const EnergyValue& e);
Json to_json(const DyadicLevel& level);
Json to_json(const RecursionDiagnostic& r);
Json to_json(const CoverageReport& r);
Json to_json(const IosevichRudnevReport& r);
Json to_json(const CollinearityProfile& c);
Json to_json(const RudnevReport& r);
Json to_json(const DeviationReport& r, bool include_rows = true);
Json to_json(const Decomposition& d);
Json to_json(const TheoremLastReport& r);
Json to_json(const ScanTable& t);

/// Flattens nested objects and arrays into `path,value` CSV rows.
std::string flatten_to_csv(const Json& value);

}  // namespace ffdist
