#include "ffdist/report.hpp"

#include <cmath>
#include <sstream>

namespace ffdist {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void flatten(const Json& value, const std::string& path, std::ostringstream& out) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      flatten(child, path.empty() ? key : path + "." + key, out);
    }
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten(value[i], path + "." + std::to_string(i), out);
    }
  } else {
    out << path << ',';
    if (value.is_string()) {
      const auto text = value.get<std::string>();
      if (text.find_first_of(",\"\n") == std::string::npos) {
        out << text;
      } else {
        out << '"';
        for (char ch : text) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      }
    } else {
      out << value.dump();
    }
    out << '\n';
  }
}

}  // namespace

Json to_json(const BigCount& v) { return to_decimal(v); }

Json to_json(const FieldSubset& a) {
  Json elements = Json::array();
  for (std::uint32_t x : a.elements()) elements.push_back(x);
  return elements;
}

Json to_json(const Spectrum& s) {
  Json counts = Json::array();
  for (const auto& c : s.counts()) counts.push_back(to_json(c));
  return {{"p", s.modulus().value()},
          {"total", to_json(s.total())},
          {"support_size", support(s).size()},
          {"counts", std::move(counts)}};
}

Json to_json(const EnergyValue& e) {
  return {{"kind", to_string(e.kind)}, {"depth", e.depth}, {"value", to_json(e.value)}};
}

Json to_json(const DyadicLevel& level) {
  return {{"exponent", level.exponent},
          {"size", level.members.size()},
          {"members", to_json(level.members)}};
}

Json to_json(const RecursionDiagnostic& r) {
  return {{"kind", to_string(r.kind)},
          {"p", r.p},
          {"set_size", r.set_size},
          {"depth", r.depth},
          {"energy", to_json(r.energy)},
          {"previous_energy", to_json(r.previous_energy)},
          {"log_factor", number(r.log_factor)},
          {"main_term", number(r.main_term)},
          {"recursive_term", number(r.recursive_term)},
          {"lemma_rhs", number(r.lemma_rhs)},
          {"corollary_rhs", number(r.corollary_rhs)},
          {"ratio_to_main_term", number(r.ratio_to_main_term)},
          {"ratio_to_bracket", number(r.ratio_to_bracket)},
          {"lemma_ratio", number(r.lemma_ratio)},
          {"corollary_ratio", number(r.corollary_ratio)},
          {"corollary_hypothesis", r.corollary_hypothesis}};
}

Json to_json(const CoverageReport& r) {
  Json out = {{"descriptor", r.descriptor},
              {"p", r.counts.modulus().value()},
              {"covered", r.covered},
              {"covered_nonzero", r.covered_nonzero},
              {"zero_attained", r.counts.size() > 0 && r.counts[0] > 0},
              {"missing_size", r.missing.size()},
              {"missing", to_json(r.missing)},
              {"total", to_json(r.counts.total())},
              {"expected_count", number(r.expected_count)},
              {"max_relative_deviation", number(r.max_relative_deviation)}};
  Json counts = Json::array();
  for (const auto& c : r.counts.counts()) counts.push_back(to_json(c));
  out["counts"] = std::move(counts);
  return out;
}

Json to_json(const IosevichRudnevReport& r) {
  return {{"size", r.size},
          {"dim", r.dim},
          {"threshold", number(r.threshold)},
          {"above_threshold", r.above_threshold},
          {"asserted", r.above_threshold},
          {"holds", r.holds},
          {"coverage", to_json(r.coverage)}};
}

Json to_json(const CollinearityProfile& c) {
  return {{"max_any", c.max_any},
          {"max_vertical", c.max_vertical},
          {"max_non_vertical", c.max_non_vertical}};
}

Json to_json(const RudnevReport& r) {
  return {{"incidences", r.incidences},
          {"point_count", r.point_count},
          {"plane_count", r.plane_count},
          {"k", r.k},
          {"roles_swapped", r.roles_swapped},
          {"product_term", number(r.product_term)},
          {"sqrt_term", number(r.sqrt_term)},
          {"k_term", number(r.k_term)},
          {"rhs", number(r.rhs)},
          {"ratio", number(r.ratio)},
          {"note", r.note}};
}

Json to_json(const DeviationReport& r, bool include_rows) {
  Json out = {{"dim", r.dim},
              {"p", r.p},
              {"size_e", to_json(r.size_e)},
              {"size_f", to_json(r.size_f)},
              {"moment_e", to_json(r.moment_e)},
              {"moment_f", to_json(r.moment_f)},
              {"holds", r.holds},
              {"worst_ratio", number(r.worst_ratio)}};
  if (include_rows) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"lambda", row.lambda},
                      {"count", to_json(row.count)},
                      {"lhs", to_json(row.lhs)},
                      {"rhs", to_json(row.rhs)},
                      {"holds", row.holds}});
    }
    out["rows"] = std::move(rows);
  }
  return out;
}

Json to_json(const Decomposition& d) {
  return {{"strategy", to_string(d.strategy)},
          {"b", to_json(d.b)},
          {"c", to_json(d.c)},
          {"additive_energy_b", to_json(d.eplus.value)},
          {"multiplicative_energy_c", to_json(d.etimes.value)},
          {"max_energy", to_json(d.max_energy())}};
}

Json to_json(const TheoremLastReport& r) {
  return {{"decomposition", to_json(r.decomposition)},
          {"depth", r.depth},
          {"distance_energy_b", to_json(r.distance_energy_b)},
          {"dot_energy_c", to_json(r.dot_energy_c)},
          {"bound", number(r.bound)},
          {"ratio", number(r.ratio)},
          {"decomposition_bound", number(r.decomposition_bound)},
          {"decomposition_ratio", number(r.decomposition_ratio)},
          {"size_hypothesis", r.size_hypothesis},
          {"decomposition_hypothesis", r.decomposition_hypothesis}};
}

Json to_json(const ScanTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json entry = {{"m", row.m},
                  {"trials", row.trials},
                  {"covered_fraction", row.covered_fraction()},
                  {"min_count", to_json(row.min_count)}};
    if (t.kind == SpectrumKind::dot) {
      entry["covered_nonzero_fraction"] =
          static_cast<double>(row.covered_nonzero_trials) / static_cast<double>(row.trials);
    }
    rows.push_back(std::move(entry));
  }
  return {{"p", t.p},
          {"n", t.n},
          {"kind", to_string(t.kind)},
          {"trials", t.trials},
          {"seed", t.seed},
          {"min_full_coverage", t.min_full_coverage ? Json(*t.min_full_coverage) : Json(nullptr)},
          {"rows", std::move(rows)}};
}

std::string flatten_to_csv(const Json& value) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(value, "", out);
  return out.str();
}

}  // namespace ffdist
