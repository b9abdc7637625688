#include "ffdist/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "ffdist/encodings.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/errors.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/parallel.hpp"
#include "ffdist/report.hpp"
#include "ffdist/rng.hpp"
#include "ffdist/selftest.hpp"
#include "ffdist/sets.hpp"
#include "ffdist/spectrum.hpp"
#include "ffdist/verify.hpp"

namespace ffdist::cli {

namespace {

struct Options {
  std::string subcommand;
  std::optional<std::uint64_t> p;
  std::string set_text;
  std::string set_file;
  std::optional<std::uint64_t> random_size;
  std::uint64_t seed = 0;
  bool isotropic = false;
  std::optional<std::uint64_t> random_points;
  unsigned dim = 0;
  std::optional<unsigned> depth;
  std::string kind;
  std::string format;
  std::string output;
  unsigned threads = 0;
  bool force = false;
  bool selftest = false;
  bool off_diagonal = false;
  std::string path = "auto";
  std::optional<unsigned> i0, j0;
  std::string strategy;
  std::uint64_t trials = 10;
  std::uint64_t random_multisets = 100;
  std::uint64_t max_entries = 0;
  std::uint64_t max_multiplicity = 4;
  bool oracle = false;
  bool diagnostic = false;
  bool levels = false;
  std::string dump;
  std::string instance;
  std::uint64_t planes = 0;
};

struct Outcome {
  Json result = Json::object();
  std::vector<std::pair<std::string, bool>> checks;
  std::optional<std::string> csv_body;

  void check(std::string name, bool passed) { checks.emplace_back(std::move(name), passed); }
};

const char* module_of(const std::string& subcommand) {
  if (subcommand == "spectrum") return "spectra";
  if (subcommand == "energy") return "energy";
  if (subcommand == "encode-check" || subcommand == "deviation-check") return "encodings";
  if (subcommand == "incidence" || subcommand == "proof-instance") return "incidence";
  return "verify";
}

std::string timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

ConvolutionPath parse_path(const std::string& text) {
  if (text == "auto") return ConvolutionPath::automatic;
  if (text == "direct") return ConvolutionPath::direct;
  if (text == "transform") return ConvolutionPath::transform;
  throw UsageError("unknown --path '" + text + "' (auto|direct|transform)");
}

class Runner {
 public:
  explicit Runner(Options opts) : o_(std::move(opts)) {
    const char* env = std::getenv("FFDIST_GUARD_OVERRIDE");
    force_ = o_.force || (env != nullptr && std::string(env) == "1");
  }

  int execute(std::ostream& out, std::ostream& err) {
    set_worker_limit(o_.threads);
    if (o_.format.empty()) {
      o_.format = (o_.subcommand == "spectrum" || o_.subcommand == "scan") && !o_.selftest
                      ? "csv"
                      : "json";
    }
    if (o_.format != "json" && o_.format != "csv") {
      throw UsageError("unknown --format '" + o_.format + "' (json|csv)");
    }
    Outcome outcome = o_.selftest ? selftest() : dispatch();
    config_["format"] = o_.format;
    std::string text = render(outcome);
    if (o_.output.empty()) {
      out << text;
    } else {
      std::ofstream file(o_.output, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + o_.output + "'");
      file << text;
      if (!file) throw UsageError("cannot write output file '" + o_.output + "'");
    }
    bool ok = true;
    for (const auto& [name, passed] : outcome.checks) {
      if (!passed) {
        err << "check failed: " << name << '\n';
        ok = false;
      }
    }
    return ok ? kExitOk : kExitViolation;
  }

 private:
  Outcome dispatch() {
    const std::string& s = o_.subcommand;
    if (s == "spectrum") return spectrum();
    if (s == "energy") return energy_cmd();
    if (s == "coverage") return coverage();
    if (s == "encode-check") return encode_check();
    if (s == "deviation-check") return deviation();
    if (s == "incidence") return incidence();
    if (s == "proof-instance") return proof_instance();
    if (s == "decompose") return decompose();
    if (s == "scan") return scan();
    if (s == "theorem-report") return theorem_report();
    throw UsageError("unknown subcommand '" + s + "'");
  }

  std::string render(const Outcome& outcome) {
    std::ostringstream text;
    bool ok = true;
    for (const auto& check : outcome.checks) ok = ok && check.second;
    if (o_.format == "json") {
      Json checks = Json::array();
      for (const auto& [name, passed] : outcome.checks) {
        checks.push_back({{"name", name}, {"passed", passed}});
      }
      Json doc = {{"tool", kToolName},
                  {"version", kToolVersion},
                  {"subcommand", o_.subcommand},
                  {"timestamp", timestamp_now()},
                  {"config", config_},
                  {"status", ok ? "ok" : "violated"},
                  {"checks", std::move(checks)},
                  {"result", outcome.result}};
      text << doc.dump(2) << '\n';
    } else {
      text << "# " << kToolName << ' ' << kToolVersion << ' ' << o_.subcommand << '\n';
      text << "# timestamp: " << timestamp_now() << '\n';
      text << "# config: " << config_.dump() << '\n';
      for (const auto& [name, passed] : outcome.checks) {
        text << "# check: " << (passed ? "PASS " : "FAIL ") << name << '\n';
      }
      text << "# status: " << (ok ? "ok" : "violated") << '\n';
      text << (outcome.csv_body ? *outcome.csv_body : flatten_to_csv(outcome.result));
    }
    return text.str();
  }

  Outcome selftest() {
    config_["selftest"] = true;
    Outcome outcome;
    Json modules = Json::array();
    for (const char* module : {"ffcore", "sets", module_of(o_.subcommand)}) {
      modules.push_back(module);
      for (const auto& check : run_selftest(module)) {
        outcome.check(check.module + ": " + check.name, check.passed);
      }
    }
    outcome.result["modules"] = std::move(modules);
    return outcome;
  }

  PrimeModulus modulus() {
    if (!o_.p) throw UsageError("--p is required");
    try {
      PrimeModulus p(*o_.p);
      config_["p"] = p.value();
      return p;
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--p: ") + e.what());
    }
  }

  // Reads --set-file once; fixes p from the header when --p is absent and
  // rejects a conflicting --p.
  const PointSet& file_points() {
    if (!file_cache_) {
      file_cache_ = read_set_file(o_.set_file);
      if (o_.p && *o_.p != file_cache_->modulus().value()) {
        throw UsageError("--p disagrees with the header of " + o_.set_file);
      }
      o_.p = file_cache_->modulus().value();
      config_["p"] = *o_.p;
    }
    return *file_cache_;
  }

  unsigned depth(unsigned fallback, const char* key) {
    unsigned d = o_.depth.value_or(fallback);
    config_[key] = d;
    return d;
  }

  std::optional<FieldSubset> subset_source(bool required = true) {
    int sources = !o_.set_text.empty() + o_.random_size.has_value() + !o_.set_file.empty();
    int point_sources = o_.isotropic + o_.random_points.has_value();
    if (sources + point_sources > 1) {
      throw UsageError("give exactly one of --set, --set-file, --random, --isotropic, --random-points");
    }
    if (!o_.set_file.empty()) {
      const PointSet& points = file_points();
      if (points.dim() == 1) {
        config_["set_source"] = {{"type", "file"}, {"path", o_.set_file}};
        return to_subset(points);
      }
      if (required) throw UsageError("this subcommand needs a one-dimensional set file");
      return std::nullopt;
    }
    if (!o_.set_text.empty()) {
      PrimeModulus p = modulus();
      FieldSubset a = parse_subset(o_.set_text, p);
      config_["set_source"] = {{"type", "inline"}, {"elements", format_subset(a)}};
      return a;
    }
    if (o_.random_size) {
      PrimeModulus p = modulus();
      config_["set_source"] = {{"type", "random"}, {"size", *o_.random_size}, {"seed", o_.seed}};
      return random_subset(p, *o_.random_size, o_.seed);
    }
    if (required && point_sources == 0) {
      throw UsageError("a set is required: --set, --set-file or --random");
    }
    if (required) throw UsageError("this subcommand takes a subset of F_p, not a point set");
    return std::nullopt;
  }

  PointSet point_source() {
    if (!o_.set_file.empty()) {
      config_["set_source"] = {{"type", "file"}, {"path", o_.set_file}};
      return file_points();
    }
    if (o_.isotropic) {
      PrimeModulus p = modulus();
      config_["set_source"] = {{"type", "isotropic"}};
      return isotropic_line(p);
    }
    if (o_.random_points) {
      PrimeModulus p = modulus();
      if (o_.dim == 0) throw UsageError("--random-points needs --dim");
      config_["set_source"] = {
          {"type", "random-points"}, {"size", *o_.random_points}, {"dim", o_.dim}, {"seed", o_.seed}};
      return random_pointset(p, o_.dim, *o_.random_points, o_.seed);
    }
    throw UsageError("a point set is required: --set-file, --isotropic or --random-points");
  }

  SpectrumKind spectrum_kind() {
    SpectrumKind kind = parse_spectrum_kind(o_.kind.empty() ? "distance" : o_.kind);
    config_["kind"] = to_string(kind);
    return kind;
  }

  ConvolutionPath convolution_path() {
    ConvolutionPath path = parse_path(o_.path);
    config_["path"] = o_.path;
    return path;
  }

  EnumerationGuard enumeration_guard() {
    config_["force"] = force_;
    return EnumerationGuard{EnumerationGuard{}.max_points, force_};
  }

  DecompositionStrategy decomposition_strategy(const FieldSubset& a) {
    std::string name = o_.strategy;
    if (name.empty()) name = a.size() <= kExhaustiveLimit ? "exhaustive" : "greedy";
    config_["strategy"] = name;
    return parse_decomposition_strategy(name);
  }

  Outcome spectrum() {
    Outcome outcome;
    ConvolutionPath path = convolution_path();
    auto subset = subset_source(false);
    Spectrum spec = Spectrum::zero(PrimeModulus(3));
    BigCount diagonal;
    if (subset) {
      SpectrumKind kind = spectrum_kind();
      unsigned n = depth(1, "n");
      spec = spectrum_power(*subset, n, kind, path);
      diagonal = kind == SpectrumKind::distance ? big_pow(subset->size(), n) : BigCount(0);
      outcome.result["set_size"] = subset->size();
      outcome.check("total equals |A|^(2n)", spec.total() == big_pow(subset->size(), 2 * n));
    } else {
      SpectrumKind kind = spectrum_kind();
      if (kind != SpectrumKind::distance) {
        throw UsageError("point sets support the distance kind only");
      }
      PointSet points = point_source();
      spec = distance_spectrum_general(points, enumeration_guard());
      diagonal = big(points.size());
      outcome.result["set_size"] = points.size();
      outcome.result["dim"] = points.dim();
      outcome.check("total equals |E|^2", spec.total() == big(points.size()) * big(points.size()));
    }
    config_["off_diagonal"] = o_.off_diagonal;
    if (o_.off_diagonal) {
      if (diagonal == 0) throw UsageError("--off-diagonal applies to the distance kind only");
      spec = off_diagonal(spec, diagonal);
    }
    outcome.result["spectrum"] = to_json(spec);
    outcome.csv_body = format_spectrum_csv(spec);
    return outcome;
  }

  Outcome energy_cmd() {
    Outcome outcome;
    FieldSubset a = *subset_source();
    EnergyKind kind = parse_energy_kind(o_.kind.empty() ? "distance" : o_.kind);
    config_["kind"] = to_string(kind);
    unsigned d = depth(1, "d");
    ConvolutionPath path = convolution_path();
    Spectrum folded = folded_spectrum(a, d, kind, path);
    EnergyValue e{energy_from_spectrum(folded), kind, d};
    outcome.result["set_size"] = a.size();
    outcome.result["energy"] = to_json(e);
    outcome.check("energy lies between total^2/p and max*total", satisfies_energy_bounds(e, folded));
    config_["oracle"] = o_.oracle;
    if (o_.oracle) {
      config_["force"] = force_;
      EnergyValue brute = energy_bruteforce_oracle(a, d, kind, OracleGuard{OracleGuard{}.max_tuples, force_});
      outcome.result["oracle_energy"] = to_json(brute.value);
      outcome.check("spectrum energy equals tuple enumeration", brute.value == e.value);
    }
    config_["levels"] = o_.levels;
    if (o_.levels) {
      Json levels = Json::array();
      bool facts = true;
      for (const auto& level : dyadic_levels(folded)) {
        levels.push_back(to_json(level));
        facts = facts && dyadic_level_facts_hold(folded, level);
      }
      outcome.result["levels"] = std::move(levels);
      outcome.check("dyadic level size bounds", facts);
    }
    config_["diagnostic"] = o_.diagnostic;
    if (o_.diagnostic) {
      outcome.result["diagnostic"] = to_json(recursion_diagnostic(a, d, kind));
    }
    return outcome;
  }

  Outcome coverage() {
    Outcome outcome;
    auto subset = subset_source(false);
    if (subset) {
      SpectrumKind kind = spectrum_kind();
      unsigned n = depth(1, "n");
      Spectrum spec = spectrum_power(*subset, n, kind, convolution_path());
      std::string descriptor = "A^" + std::to_string(n) + " " + std::string(to_string(kind)) +
                               " spectrum, |A|=" + std::to_string(subset->size());
      CoverageReport report = coverage_check(spec, descriptor);
      outcome.result = to_json(report);
      const std::uint32_t p = subset->modulus().value();
      if (subset->size() == p) {
        // A = F_p: n >= 2 squares, or a single product, already reach every value.
        if (kind == SpectrumKind::dot || n >= 2) {
          outcome.check("full field covers F_p", report.covered);
        }
        if (kind == SpectrumKind::distance && n == 3) {
          outcome.check("full field deviation within 2/p", deviation_within(spec, 2, p));
        }
      }
      outcome.csv_body = format_spectrum_csv(spec);
    } else {
      PointSet points = point_source();
      IosevichRudnevReport report = iosevich_rudnev_check(points, enumeration_guard());
      outcome.result = to_json(report);
      if (report.above_threshold) {
        outcome.check("point set above 4p^((d+1)/2) covers F_p", report.holds);
      }
      outcome.csv_body = format_spectrum_csv(report.coverage.counts);
    }
    return outcome;
  }

  Outcome encode_check() {
    Outcome outcome;
    FieldSubset a = *subset_source();
    SpectrumKind kind = spectrum_kind();
    unsigned d = depth(1, "d");
    if (d == 0) throw UsageError("--d must be at least 1");
    const BigCount size = big(a.size());
    auto previous = [&](EnergyKind k) {
      return d == 1 ? BigCount(1) : energy(a, d - 1, k).value;
    };
    auto record = [&](const char* name, const EncodedPair& pair, const Spectrum& expected,
                      const BigCount& moment) {
      Spectrum counts = pair_count_spectrum(pair.first, pair.second);
      DeviationReport dev = deviation_check(pair.first, pair.second);
      outcome.result[name] = {{"dim", pair.first.dim()},
                              {"distinct_points_e", pair.first.distinct_size()},
                              {"distinct_points_f", pair.second.distinct_size()},
                              {"size_e", to_json(pair.first.total())},
                              {"second_moment_e", to_json(pair.first.second_moment())},
                              {"second_moment_f", to_json(pair.second.second_moment())},
                              {"expected_second_moment", to_json(moment)},
                              {"pair_counts", to_json(counts)},
                              {"deviation", to_json(dev, false)}};
      std::string label(name);
      outcome.check(label + ": pair counts equal the spectrum", counts == expected);
      outcome.check(label + ": second moments", pair.first.second_moment() == moment &&
                                                     pair.second.second_moment() == moment);
      outcome.check(label + ": deviation bound", dev.holds);
    };
    if (kind == SpectrumKind::distance) {
      record("odd", encode_distance_odd(a, d), distance_spectrum_power(a, 2 * d + 1),
             size * distance_energy(a, d).value);
      record("even", encode_distance_even(a, d), distance_spectrum_power(a, 2 * d),
             size * size * previous(EnergyKind::distance));
    } else {
      record("dot", encode_dot(a, d), dot_spectrum_power(a, 2 * d),
             size * size * previous(EnergyKind::dot));
    }
    return outcome;
  }

  Outcome deviation() {
    Outcome outcome;
    PrimeModulus p = modulus();
    std::uint64_t entries = o_.max_entries ? o_.max_entries : 2ull * p.value();
    if (o_.max_multiplicity == 0) throw UsageError("--max-multiplicity must be positive");
    config_["random_multisets"] = o_.random_multisets;
    config_["seed"] = o_.seed;
    config_["max_entries"] = entries;
    config_["max_multiplicity"] = o_.max_multiplicity;
    std::vector<unsigned> dims;
    if (o_.dim == 0) {
      dims = {2, 3};
    } else if (o_.dim == 2 || o_.dim == 3) {
      dims = {o_.dim};
    } else {
      throw UsageError("--dim must be 2 or 3");
    }
    config_["dims"] = dims;
    Json per_dim = Json::array();
    for (unsigned dim : dims) {
      std::vector<DeviationReport> reports(o_.random_multisets);
      parallel_for(reports.size(), [&](std::size_t i) {
        SeededRng rng(derive_seed(o_.seed, {dim, i}));
        WeightedPointSet e = random_weighted_set(p, dim, entries, o_.max_multiplicity, rng);
        WeightedPointSet f = random_weighted_set(p, dim, entries, o_.max_multiplicity, rng);
        reports[i] = deviation_check(e, f);
      });
      std::uint64_t failures = 0;
      double worst = 0;
      for (const auto& r : reports) {
        failures += !r.holds;
        worst = std::max(worst, r.worst_ratio);
      }
      per_dim.push_back({{"dim", dim},
                         {"pairs", reports.size()},
                         {"failures", failures},
                         {"worst_ratio", worst}});
      outcome.check("deviation bound in dimension " + std::to_string(dim), failures == 0);
    }
    outcome.result["dimensions"] = std::move(per_dim);
    return outcome;
  }

  Outcome incidence() {
    Outcome outcome;
    std::optional<IncidenceInstance> inst;
    if (!o_.instance.empty()) {
      std::ifstream file(o_.instance, std::ios::binary);
      if (!file) throw UsageError("cannot read instance file '" + o_.instance + "'");
      std::stringstream text;
      text << file.rdbuf();
      inst = parse_instance_dump(text.str());
      config_["instance"] = o_.instance;
      config_["p"] = inst->p.value();
    } else {
      PrimeModulus p = modulus();
      if (!o_.random_points || o_.planes == 0) {
        throw UsageError("give --instance, or --random-points and --planes");
      }
      config_["set_source"] = {{"type", "random-instance"},
                               {"points", *o_.random_points},
                               {"planes", o_.planes},
                               {"seed", o_.seed}};
      PointSet cloud = random_pointset(p, 3, *o_.random_points, derive_seed(o_.seed, {0}));
      std::vector<Point3> points;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto x = cloud.point(i);
        points.push_back({x[0], x[1], x[2]});
      }
      SeededRng rng(derive_seed(o_.seed, {1}));
      std::vector<Plane> planes;
      while (planes.size() < o_.planes) {
        Plane s{static_cast<std::uint32_t>(rng.below(p.value())),
                static_cast<std::uint32_t>(rng.below(p.value())),
                static_cast<std::uint32_t>(rng.below(p.value())),
                static_cast<std::uint32_t>(rng.below(p.value()))};
        if (s.a != 0 || s.b != 0 || s.c != 0) planes.push_back(s);
      }
      inst = IncidenceInstance{p, std::move(points), PlaneSet(p, std::move(planes)), 0, true};
    }
    config_["force"] = force_;
    CollinearityProfile profile = collinearity_profile(inst->p, inst->points, kCollinearityGuard, force_);
    inst->k = profile.max_any;
    inst->k_exact = true;
    std::uint64_t direct = count_incidences(inst->p, inst->points, inst->planes, IncidenceStrategy::direct);
    std::uint64_t grouped = count_incidences(inst->p, inst->points, inst->planes, IncidenceStrategy::grouped);
    outcome.check("direct and grouped counts agree", direct == grouped);
    outcome.result = {{"p", inst->p.value()},
                      {"point_count", inst->points.size()},
                      {"plane_count", inst->planes.size()},
                      {"incidences", grouped},
                      {"collinearity", to_json(profile)},
                      {"rudnev", to_json(rudnev_diagnostic(*inst))}};
    return outcome;
  }

  Outcome proof_instance() {
    Outcome outcome;
    FieldSubset a = *subset_source();
    const PrimeModulus& p = a.modulus();
    unsigned d = depth(2, "d");
    if (d < 2) throw UsageError("--d must be at least 2");
    config_["force"] = force_;
    std::vector<DyadicLevel> levels = dyadic_levels(fold(diff_square_spectrum(a), d - 1));
    Json level_json = Json::array();
    for (const auto& level : levels) level_json.push_back(to_json(level));
    outcome.result["set_size"] = a.size();
    outcome.result["levels"] = std::move(level_json);

    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (const auto& li : levels) {
      for (const auto& lj : levels) {
        if ((!o_.i0 || *o_.i0 == li.exponent) && (!o_.j0 || *o_.j0 == lj.exponent)) {
          pairs.emplace_back(li.exponent, lj.exponent);
        }
      }
    }
    if (o_.i0) config_["i0"] = *o_.i0;
    if (o_.j0) config_["j0"] = *o_.j0;
    if (pairs.empty()) throw UsageError("no nonempty dyadic level matches --i0/--j0");
    if (!o_.dump.empty() && pairs.size() != 1) {
      throw UsageError("--dump needs --i0 and --j0 selecting a single instance");
    }

    std::vector<std::uint32_t> projection;
    for (std::uint32_t x : a.elements()) {
      for (std::uint32_t e : a.elements()) {
        projection.push_back(p.neg(FieldElement{p.add_raw(x, x)}).value);
        projection.push_back(e);
      }
    }
    PointSet grid(p, 2, std::move(projection));

    Json instances = Json::array();
    for (auto [i0, j0] : pairs) {
      ProofInstance proof = build_proof_instance(a, d, i0, j0);
      const IncidenceInstance& inst = proof.instance;
      std::uint64_t incidences = count_incidences(p, inst.points, inst.planes);
      std::string tag = "levels (" + std::to_string(i0) + "," + std::to_string(j0) + ")";
      outcome.check(tag + ": incidences equal the level pair sum",
                    big(incidences) == proof.level_pair_sum);
      outcome.check(tag + ": point and plane counts",
                    inst.points.size() == a.size() * a.size() * proof.level_i.size() &&
                        inst.planes.size() == a.size() * a.size() * proof.level_j.size());
      std::vector<std::uint32_t> shadow;
      for (const auto& x : inst.points) {
        shadow.push_back(x[0]);
        shadow.push_back(x[1]);
      }
      outcome.check(tag + ": points project onto -2A x A", PointSet(p, 2, std::move(shadow)) == grid);
      Json entry = {{"i0", i0},
                    {"j0", j0},
                    {"level_i_size", proof.level_i.size()},
                    {"level_j_size", proof.level_j.size()},
                    {"point_count", inst.points.size()},
                    {"plane_count", inst.planes.size()},
                    {"incidences", incidences},
                    {"level_pair_sum", to_json(proof.level_pair_sum)},
                    {"k", inst.k},
                    {"k_exact", inst.k_exact}};
      if (inst.points.size() <= kCollinearityGuard || force_) {
        CollinearityProfile profile = collinearity_profile(p, inst.points, kCollinearityGuard, true);
        entry["collinearity"] = to_json(profile);
        outcome.check(tag + ": vertical lines carry at most |P_i0| points",
                      profile.max_vertical <= proof.level_i.size());
        outcome.check(tag + ": other lines carry at most |A| points",
                      profile.max_non_vertical <= a.size());
      }
      entry["rudnev"] = to_json(rudnev_diagnostic(inst));
      instances.push_back(std::move(entry));
      if (!o_.dump.empty()) {
        std::ofstream file(o_.dump, std::ios::binary);
        if (!file) throw UsageError("cannot open dump file '" + o_.dump + "'");
        file << format_instance_dump(inst);
        config_["dump"] = o_.dump;
      }
    }
    outcome.result["instances"] = std::move(instances);
    return outcome;
  }

  static bool valid_partition(const FieldSubset& a, const Decomposition& d) {
    for (std::uint32_t x : d.b.elements()) {
      if (d.c.contains(x)) return false;
    }
    return d.b.size() + d.c.size() == a.size() &&
           std::all_of(a.elements().begin(), a.elements().end(),
                       [&](std::uint32_t x) { return d.b.contains(x) || d.c.contains(x); });
  }

  Outcome decompose() {
    Outcome outcome;
    FieldSubset a = *subset_source();
    std::vector<DecompositionStrategy> strategies;
    if (o_.strategy == "both") {
      config_["strategy"] = "both";
      strategies = {DecompositionStrategy::exhaustive, DecompositionStrategy::greedy};
    } else {
      strategies = {decomposition_strategy(a)};
    }
    EnergyValue eplus = additive_energy(a);
    EnergyValue etimes = multiplicative_energy(a);
    outcome.result["set_size"] = a.size();
    outcome.result["additive_energy"] = to_json(eplus.value);
    outcome.result["multiplicative_energy"] = to_json(etimes.value);
    Json results = Json::array();
    std::vector<Decomposition> found;
    for (auto strategy : strategies) {
      Decomposition d = balog_wooley_decompose(a, strategy);
      std::string tag(to_string(strategy));
      outcome.check(tag + ": B and C partition A", valid_partition(a, d));
      outcome.check(tag + ": energies do not exceed those of A",
                    d.eplus.value <= eplus.value && d.etimes.value <= etimes.value);
      results.push_back(to_json(d));
      found.push_back(std::move(d));
    }
    if (found.size() == 2) {
      outcome.check("exhaustive is no worse than greedy", found[0].max_energy() <= found[1].max_energy());
    }
    outcome.result["decompositions"] = std::move(results);
    return outcome;
  }

  Outcome scan() {
    Outcome outcome;
    PrimeModulus p = modulus();
    SpectrumKind kind = spectrum_kind();
    unsigned n = depth(2, "n");
    config_["trials"] = o_.trials;
    config_["seed"] = o_.seed;
    ScanTable table = threshold_scan(p, n, kind, o_.trials, o_.seed);
    outcome.result = to_json(table);
    outcome.csv_body = format_scan_csv(table);
    return outcome;
  }

  Outcome theorem_report() {
    Outcome outcome;
    FieldSubset a = *subset_source();
    unsigned d = depth(2, "d");
    if (d < 2) throw UsageError("--d must be at least 2");
    TheoremLastReport report = theorem_last_report(a, d, decomposition_strategy(a));
    outcome.check("B and C partition A", valid_partition(a, report.decomposition));
    outcome.result = to_json(report);
    outcome.result["set_size"] = a.size();
    return outcome;
  }

  Options o_;
  bool force_ = false;
  Json config_ = Json::object();
  std::optional<PointSet> file_cache_;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format: json or csv");
  sub->add_option("--output", o.output, "Write the report to this file");
  sub->add_option("--threads", o.threads, "Worker thread cap (0 = all cores)");
  sub->add_flag("--force", o.force, "Override enumeration guards");
  sub->add_flag("--selftest", o.selftest, "Run the module's oracle suite instead");
}

void add_subset(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "Odd prime modulus");
  sub->add_option("--set", o.set_text, "Inline elements, e.g. 0,1,5..9");
  sub->add_option("--set-file", o.set_file, "Set file with a p=<p> d=<d> header");
  sub->add_option("--random", o.random_size, "Random subset of this size");
  sub->add_option("--seed", o.seed, "Seed for random inputs");
}

void add_points(CLI::App* sub, Options& o) {
  sub->add_flag("--isotropic", o.isotropic, "Use the isotropic line {(x, ix)}");
  sub->add_option("--random-points", o.random_points, "Random point set of this size");
  sub->add_option("--dim", o.dim, "Dimension for --random-points");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact distance, dot-product and energy computations over prime fields", "ffdist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + std::string(kToolVersion));

  auto* spectrum = app.add_subcommand("spectrum", "Pair-count spectrum of A^n or of a point set");
  auto* energy = app.add_subcommand("energy", "d-fold energies, with oracle and diagnostics");
  auto* coverage = app.add_subcommand("coverage", "Coverage of F_p by a spectrum");
  auto* encode = app.add_subcommand("encode-check", "Check the multiset encodings of A^m");
  auto* deviation = app.add_subcommand("deviation-check", "Pair-count deviation bounds on random multisets");
  auto* incidence = app.add_subcommand("incidence", "Point-plane incidences and collinearity");
  auto* proof = app.add_subcommand("proof-instance", "Build and check the point-plane instance of A");
  auto* decompose = app.add_subcommand("decompose", "Split A into additively and multiplicatively small parts");
  auto* scan = app.add_subcommand("scan", "Coverage frequency of random m-subsets");
  auto* theorem = app.add_subcommand("theorem-report", "Energies of a decomposition against the bound");

  for (auto* sub : app.get_subcommands({})) add_common(sub, o);
  for (auto* sub : {spectrum, energy, coverage, encode, proof, decompose, theorem}) add_subset(sub, o);
  for (auto* sub : {spectrum, coverage}) add_points(sub, o);

  for (auto* sub : {spectrum, coverage}) {
    sub->add_option("--n,--d", o.depth, "Power n of A^n");
    sub->add_option("--kind", o.kind, "distance or dot");
    sub->add_option("--path", o.path, "Convolution path: auto, direct or transform");
  }
  spectrum->add_flag("--off-diagonal", o.off_diagonal, "Drop the pairs (x, x) from lambda = 0");

  energy->add_option("--d,--n", o.depth, "Fold depth d");
  energy->add_option("--kind", o.kind, "distance, dot, additive or multiplicative");
  energy->add_option("--path", o.path, "Convolution path: auto, direct or transform");
  energy->add_flag("--oracle", o.oracle, "Cross-check against 4d-tuple enumeration");
  energy->add_flag("--diagnostic", o.diagnostic, "Add the recursive bound diagnostic");
  energy->add_flag("--levels", o.levels, "Add the dyadic level sets of the folded spectrum");

  encode->add_option("--d,--n", o.depth, "Fold depth d");
  encode->add_option("--kind", o.kind, "distance or dot");

  deviation->add_option("--p", o.p, "Odd prime modulus");
  deviation->add_option("--seed", o.seed, "Seed for random multisets");
  deviation->add_option("--random-multisets", o.random_multisets, "Multiset pairs per dimension");
  deviation->add_option("--dim", o.dim, "2 or 3 (default: both)");
  deviation->add_option("--max-entries", o.max_entries, "Distinct points per multiset (default 2p)");
  deviation->add_option("--max-multiplicity", o.max_multiplicity, "Largest multiplicity");

  incidence->add_option("--p", o.p, "Odd prime modulus");
  incidence->add_option("--seed", o.seed, "Seed for random instances");
  incidence->add_option("--instance", o.instance, "Instance dump to read");
  incidence->add_option("--random-points", o.random_points, "Random points in F_p^3");
  incidence->add_option("--planes", o.planes, "Random planes");

  proof->add_option("--d,--n", o.depth, "Fold depth d >= 2");
  proof->add_option("--i0", o.i0, "Dyadic level of the points");
  proof->add_option("--j0", o.j0, "Dyadic level of the planes");
  proof->add_option("--dump", o.dump, "Write the instance dump to this file");

  decompose->add_option("--strategy", o.strategy, "exhaustive, greedy or both");
  theorem->add_option("--strategy", o.strategy, "exhaustive or greedy");
  theorem->add_option("--d,--n", o.depth, "Fold depth d >= 2");

  scan->add_option("--p", o.p, "Odd prime modulus");
  scan->add_option("--n,--d", o.depth, "Power n");
  scan->add_option("--kind", o.kind, "distance or dot");
  scan->add_option("--trials", o.trials, "Random sets per size");
  scan->add_option("--seed", o.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  try {
    Runner runner(std::move(o));
    return runner.execute(out, err);
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << " (use --force or FFDIST_GUARD_OVERRIDE=1)\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ffdist::cli
