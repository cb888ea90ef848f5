#pragma once

// Monte-Carlo experiment runner: scenarios, trials, CSV output and summaries.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "boosting.hpp"
#include "core.hpp"
#include "hardness.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "weaklearn.hpp"

namespace agboost::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader = "scenario,algorithm,m,trial,seed,err,bayes_err,excess,beta_bound,wall_ms";

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

struct InstanceParams {
  std::size_t n = 0;  ///< Hadamard block size (power of two)
  std::size_t s = 0;  ///< number of blocks
  std::size_t N = 0;  ///< universe size for noisy-table
  std::size_t d = 0;  ///< hard-instance size
  double L = 0.0;     ///< hard-instance optimal error
  std::optional<std::size_t> instance_m;  ///< hard-instance sample budget; minimal admissible when unset
  double eta = 0.0;   ///< label noise rate
  std::string distribution_file;
};

struct WeakLearnerParams {
  std::string type = "hadamard-oracle";  ///< hadamard | hadamard-oracle | stump | stump-oracle
  double eps0 = 0.0;
  double delta0 = 0.0;
  std::size_t m0 = 0;  ///< 0: derived from the contract

  bool oracle() const { return type == "hadamard-oracle" || type == "stump-oracle"; }
  bool hadamard() const { return type == "hadamard" || type == "hadamard-oracle"; }
};

struct ExperimentConfig {
  std::string scenario = "noisy-table";
  InstanceParams instance;
  std::string algorithm = "agnostic_boost";
  WeakLearnerParams weak_learner;
  double delta = 0.1;
  std::optional<std::size_t> rounds;  ///< agnostic_boost / adaboost round override
  double bound_C = 1.0;
  std::vector<std::size_t> m;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string output = "results.csv";
  bool timing = false;
  json source;  ///< the document the config was parsed from
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw ValidationError("config." + field + ": " + what);
}

inline bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!is_count(obj.at(key))) field_error(path + key, "must be a non-negative integer");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    field_error(path + key, std::string("wrong type (") + e.what() + ")");
  }
}

inline std::optional<std::size_t> get_optional_size(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!is_count(obj.at(key))) field_error(path + key, "must be a non-negative integer");
  return obj.at(key).get<std::size_t>();
}

}  // namespace detail

/// Parses and validates a JSON experiment config; errors name the field.
inline ExperimentConfig parse_config(const json& doc) {
  using detail::field_error;
  if (!doc.is_object()) throw ValidationError("config: document must be a JSON object");
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.scenario = detail::get_field<std::string>(doc, "scenario", "", cfg.scenario);
  cfg.algorithm = detail::get_field<std::string>(doc, "algorithm", "", cfg.algorithm);
  cfg.trials = detail::get_field<std::size_t>(doc, "trials", "", 0);
  cfg.seed = detail::get_field<std::uint64_t>(doc, "seed", "", 0);
  cfg.workers = detail::get_field<std::size_t>(doc, "workers", "", 1);
  cfg.output = detail::get_field<std::string>(doc, "output", "", cfg.output);
  cfg.timing = detail::get_field<bool>(doc, "timing", "", false);
  cfg.delta = detail::get_field<double>(doc, "delta", "", cfg.delta);
  cfg.rounds = detail::get_optional_size(doc, "rounds", "");
  cfg.bound_C = detail::get_field<double>(doc, "bound_C", "", cfg.bound_C);
  if (doc.contains("m")) {
    if (!doc.at("m").is_array()) field_error("m", "must be an array of sample sizes");
    for (const auto& v : doc.at("m")) {
      if (!detail::is_count(v) || v.get<std::size_t>() == 0) field_error("m", "entries must be positive integers");
      cfg.m.push_back(v.get<std::size_t>());
    }
  }

  const json inst = doc.value("instance", json::object());
  if (!inst.is_object()) field_error("instance", "must be an object");
  auto& ip = cfg.instance;
  ip.n = detail::get_field<std::size_t>(inst, "n", "instance.", 0);
  ip.s = detail::get_field<std::size_t>(inst, "s", "instance.", 0);
  ip.N = detail::get_field<std::size_t>(inst, "N", "instance.", 0);
  ip.d = detail::get_field<std::size_t>(inst, "d", "instance.", 0);
  ip.L = detail::get_field<double>(inst, "L", "instance.", 0.0);
  ip.instance_m = detail::get_optional_size(inst, "instance_m", "instance.");
  ip.eta = detail::get_field<double>(inst, "eta", "instance.", 0.0);
  ip.distribution_file = detail::get_field<std::string>(inst, "distribution_file", "instance.", "");

  const json wl = doc.value("weak_learner", json::object());
  if (!wl.is_object()) field_error("weak_learner", "must be an object");
  auto& wp = cfg.weak_learner;
  wp.type = detail::get_field<std::string>(wl, "type", "weak_learner.", wp.type);
  wp.eps0 = detail::get_field<double>(wl, "eps0", "weak_learner.", 0.0);
  wp.delta0 = detail::get_field<double>(wl, "delta0", "weak_learner.", 0.0);
  wp.m0 = detail::get_field<std::size_t>(wl, "m0", "weak_learner.", 0);

  // Validation against module preconditions.
  static const std::vector<std::string> scenarios{"hadamard-realizable", "hard-instance", "noisy-table", "custom"};
  static const std::vector<std::string> algorithms{"agnostic_boost", "adaboost", "erm", "weak-only"};
  static const std::vector<std::string> learners{"hadamard", "hadamard-oracle", "stump", "stump-oracle"};
  auto one_of = [](const std::vector<std::string>& xs, const std::string& v) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
  };
  if (!one_of(scenarios, cfg.scenario))
    field_error("scenario", "unknown scenario '" + cfg.scenario + "'");
  if (!one_of(algorithms, cfg.algorithm)) field_error("algorithm", "unknown algorithm '" + cfg.algorithm + "'");
  if (!one_of(learners, wp.type)) field_error("weak_learner.type", "unknown weak learner '" + wp.type + "'");
  if (cfg.workers == 0) field_error("workers", "must be >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) field_error("delta", "must lie in (0, 1)");
  if (!(cfg.bound_C > 0.0)) field_error("bound_C", "must be positive");
  if (cfg.rounds && *cfg.rounds == 0) field_error("rounds", "must be >= 1");
  if (!(ip.eta >= 0.0 && ip.eta < 0.5)) field_error("instance.eta", "must lie in [0, 1/2)");
  if (!(wp.eps0 >= 0.0 && wp.eps0 < 1.0)) field_error("weak_learner.eps0", "must lie in [0, 1)");
  if (!(wp.delta0 >= 0.0 && wp.delta0 < 1.0)) field_error("weak_learner.delta0", "must lie in [0, 1)");
  if (cfg.trials > 0 && cfg.m.empty()) field_error("m", "must list at least one sample size");

  auto power_of_two = [](std::size_t v) { return v >= 1 && (v & (v - 1)) == 0; };
  if (wp.hadamard() || cfg.scenario == "hadamard-realizable") {
    if (!power_of_two(ip.n)) field_error("instance.n", "must be a power of two");
    if (ip.s == 0) field_error("instance.s", "must be >= 1");
  }
  if (cfg.scenario == "noisy-table" && ip.N == 0) field_error("instance.N", "must be >= 1");
  if (cfg.scenario == "hard-instance") {
    if (ip.d < 2) field_error("instance.d", "must be >= 2");
    if (!(ip.L > 0.0 && ip.L < 0.5)) field_error("instance.L", "must lie in (0, 1/2)");
    if (ip.instance_m && static_cast<double>(*ip.instance_m) * ip.L * (0.5 - ip.L) * (0.5 - ip.L) <
                             static_cast<double>(ip.d))
      field_error("instance.instance_m", "must satisfy m >= d / (L (1/2 - L)^2)");
  }
  if (cfg.scenario == "custom" && ip.distribution_file.empty())
    field_error("instance.distribution_file", "required for the custom scenario");
  if (cfg.algorithm == "agnostic_boost") {
    for (std::size_t m : cfg.m) {
      if (m < 3) field_error("m", "agnostic_boost needs m >= 3");
      if (m / 3 > kMaxRelabelingBits) field_error("m", "agnostic_boost needs m/3 <= 30");
    }
  }
  if (wp.type == "hadamard" || wp.type == "stump") {
    if (wp.eps0 <= 0.0 || wp.delta0 <= 0.0) {
      if (wp.m0 == 0) field_error("weak_learner.m0", "sampling learners need m0, or eps0 and delta0 > 0");
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config: invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  std::string id;
  DiscreteDistribution distribution;
  double bayes_error = 0.0;
};

/// Uniform marginal over [N]; label f(x) with probability 1 - eta.
inline DiscreteDistribution noisy_table(std::span<const int> table, double eta) {
  const double share = 1.0 / static_cast<double>(table.size());
  std::vector<double> pos(table.size()), neg(table.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    pos[x] = share * (table[x] > 0 ? 1.0 - eta : eta);
    neg[x] = share * (table[x] > 0 ? eta : 1.0 - eta);
  }
  return DiscreteDistribution::normalized(std::move(pos), std::move(neg));
}

inline DiscreteDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config.instance.distribution_file: cannot open '" + path + "'");
  try {
    const json doc = json::parse(in);
    return DiscreteDistribution(doc.at("mass_pos").get<std::vector<double>>(),
                                doc.at("mass_neg").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError("config.instance.distribution_file: " + std::string(e.what()));
  }
}

inline json hard_instance_json(const HardInstance& inst) {
  return json{{"d", inst.d},
              {"L", inst.L},
              {"m", inst.m},
              {"c", inst.c},
              {"p", inst.p},
              {"b", inst.b},
              {"mass_pos", std::vector<double>(inst.distribution.mass_pos().begin(), inst.distribution.mass_pos().end())},
              {"mass_neg", std::vector<double>(inst.distribution.mass_neg().begin(), inst.distribution.mass_neg().end())}};
}

/// Builds the population distribution. Random parts (target table, hidden
/// signs b) come from Rng(derive_seed(seed, 0x5ce7a210)).
inline Scenario build_scenario(const ExperimentConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, 0x5ce7a210ULL));
  const auto& ip = cfg.instance;
  if (cfg.scenario == "noisy-table") {
    std::vector<int> table(ip.N);
    for (auto& v : table) v = rng.sign();
    auto dist = noisy_table(table, ip.eta);
    const double be = bayes_error(dist).error;
    return {cfg.scenario, std::move(dist), be};
  }
  if (cfg.scenario == "hadamard-realizable") {
    const BaseClassHandle handle(ip.n, ip.s);
    const auto target = handle.element_at(rng.below(static_cast<std::uint64_t>(handle.size())));
    std::vector<int> table(handle.universe_size());
    for (std::size_t x = 0; x < table.size(); ++x) table[x] = handle.eval(target, x);
    auto dist = noisy_table(table, ip.eta);
    const double be = bayes_error(dist).error;
    return {cfg.scenario, std::move(dist), be};
  }
  if (cfg.scenario == "hard-instance") {
    const double m = static_cast<double>(ip.instance_m.value_or(min_admissible_m(ip.d, ip.L)));
    auto inst = hard_instance(ip.d, ip.L, m, std::nullopt, rng);
    const double be = bayes_error(inst.distribution).error;
    return {cfg.scenario, std::move(inst.distribution), be};
  }
  auto dist = load_distribution(ip.distribution_file);
  const double be = bayes_error(dist).error;
  return {cfg.scenario, std::move(dist), be};
}

inline WeakLearner build_learner(const ExperimentConfig& cfg, std::size_t universe_size) {
  const auto& wp = cfg.weak_learner;
  if (wp.hadamard()) {
    const BaseClassHandle handle(cfg.instance.n, cfg.instance.s);
    if (handle.universe_size() != universe_size)
      throw ValidationError("config.instance: hadamard learner needs n*s = " + std::to_string(universe_size));
    return make_hadamard_learner(handle, wp.eps0, wp.delta0, wp.m0);
  }
  WeakLearnerContract contract;
  // A stump class over [N] has 2(N+1) members; no advantage guarantee exists.
  contract.gamma = 1.0;
  contract.eps0 = wp.eps0;
  contract.delta0 = wp.delta0;
  contract.m0 = wp.m0 ? wp.m0
                      : (wp.eps0 > 0.0 && wp.delta0 > 0.0
                             ? hoeffding_m0(2.0 * static_cast<double>(universe_size + 1), wp.delta0, wp.eps0)
                             : 1);
  return make_stump_learner(contract);
}

/// log2 of the weak learner's (finite) class size.
inline double learner_log2_class_size(const ExperimentConfig& cfg, std::size_t universe_size) {
  if (cfg.weak_learner.hadamard()) return BaseClassHandle(cfg.instance.n, cfg.instance.s).log2_size();
  return std::log2(2.0 * static_cast<double>(universe_size + 1));
}

/// m i.i.d. draws from an exact distribution.
inline Dataset sample_from(const DiscreteDistribution& dist, std::size_t m, Rng& rng) {
  const std::size_t n = dist.universe_size();
  std::vector<double> cumulative(2 * n);
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    total += dist.mass(x, -1);
    cumulative[2 * x] = total;
    total += dist.mass(x, 1);
    cumulative[2 * x + 1] = total;
  }
  std::vector<std::size_t> points(m);
  std::vector<int> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto cell = static_cast<std::size_t>(it - cumulative.begin());
    points[i] = cell / 2;
    labels[i] = (cell % 2) ? 1 : -1;
  }
  return Dataset(n, std::move(points), std::move(labels));
}

// ---------------------------------------------------------------------------
// Trials

struct TrialRecord {
  std::string scenario;
  std::string algorithm;
  std::size_t m = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double err = 0.0;
  double bayes_err = 0.0;
  double excess = 0.0;
  double beta_bound = 0.0;
  double wall_ms = 0.0;
  // Diagnostics; not part of the CSV.
  double train_loss0 = 0.0;        ///< L^0 of the output on the full sample
  double selected_gamma = 0.0;     ///< agnostic_boost: chosen grid slot
  std::uint64_t selected_id = 0;   ///< agnostic_boost: chosen relabeling
};

/// Runs one (m, trial) cell. `algorithm_seed` drives every random choice the
/// algorithm makes.
inline Hypothesis run_algorithm(const ExperimentConfig& cfg, const Dataset& sample, const WeakLearner& learner,
                                std::uint64_t algorithm_seed, TrialRecord& rec) {
  if (cfg.algorithm == "erm") return oracle::erm_all_functions(sample).table;
  if (cfg.algorithm == "weak-only") {
    if (cfg.weak_learner.oracle()) {
      const std::vector<double> w(sample.size(), 1.0 / static_cast<double>(sample.size()));
      return learner.learn_from_distribution(sample, w);
    }
    Rng rng(algorithm_seed);
    return learner.learn(sample, rng);
  }
  if (cfg.algorithm == "adaboost") {
    AdaBoostConfig ac;
    const double theta = learner.contract.gamma - learner.contract.eps0;
    ac.rounds = cfg.rounds.value_or(static_cast<std::size_t>(
        std::ceil(32.0 * (1.0 + std::log(static_cast<double>(sample.size()))) / (theta * theta))));
    ac.delta = cfg.delta;
    ac.delta0 = learner.contract.delta0;
    ac.m0 = learner.contract.m0;
    ac.oracle_mode = cfg.weak_learner.oracle();
    return modified_adaboost(sample, learner, ac, algorithm_seed).hypothesis();
  }
  AgnosticBoostConfig bc;
  bc.delta = cfg.delta;
  bc.delta0 = learner.contract.delta0;
  bc.m0 = learner.contract.m0;
  bc.oracle_mode = cfg.weak_learner.oracle();
  bc.rounds_override = cfg.rounds;
  bc.seed = algorithm_seed;
  bc.workers = 1;
  auto result = agnostic_boost(sample, learner, bc);
  rec.selected_gamma = result.audit.slots[result.audit.chosen_slot].gamma;
  rec.selected_id = result.audit.chosen_id;
  return std::move(result.hypothesis);
}

/// Every (m, trial) pair, ordered by m then trial. Trial seeds are
/// derive_seed(seed, m, trial); the sample uses that seed directly and the
/// algorithm uses derive_seed(trial_seed, 1).
inline std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) return {};
  const Scenario scenario = build_scenario(cfg);
  const std::size_t universe = scenario.distribution.universe_size();
  const WeakLearner learner = build_learner(cfg, universe);
  if (cfg.algorithm == "erm" && universe > 20)
    throw GuardError("erm: universe of " + std::to_string(universe) + " points exceeds the enumeration guard");

  const bool theta_ok = learner.contract.gamma > learner.contract.eps0;
  std::vector<double> betas(cfg.m.size(), 0.0);
  for (std::size_t j = 0; j < cfg.m.size(); ++j) {
    if (!theta_ok) continue;
    BoundParams bp;
    bp.d_hat = learner_log2_class_size(cfg, universe);
    bp.gamma = learner.contract.gamma;
    bp.eps0 = learner.contract.eps0;
    bp.delta = cfg.delta;
    bp.m = static_cast<double>(cfg.m[j]);
    bp.C = cfg.bound_C;
    betas[j] = agboost::beta_bound(bp).value;
  }

  const std::size_t tasks = cfg.m.size() * cfg.trials;
  std::vector<TrialRecord> records(tasks);
  std::vector<std::exception_ptr> failures(tasks);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      try {
        const std::size_t mj = task / cfg.trials;
        const std::size_t trial = task % cfg.trials;
        const std::size_t m = cfg.m[mj];
        TrialRecord rec;
        rec.scenario = scenario.id;
        rec.algorithm = cfg.algorithm;
        rec.m = m;
        rec.trial = trial;
        rec.seed = derive_seed(cfg.seed, m, trial);
        const auto start = std::chrono::steady_clock::now();
        Rng sample_rng(rec.seed);
        const Dataset sample = sample_from(scenario.distribution, m, sample_rng);
        const Hypothesis h = run_algorithm(cfg, sample, learner, derive_seed(rec.seed, 1), rec);
        const Hypothesis decoded = sign_decode(h, universe);
        rec.err = error_binary(decoded, scenario.distribution);
        rec.bayes_err = scenario.bayes_error;
        rec.excess = rec.err - rec.bayes_err;
        rec.beta_bound = betas[mj];
        rec.train_loss0 = margin_loss(h, sample, 0.0);
        if (cfg.timing)
          rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (task % 100 == 0) {
          const double check = oracle::audit_error(decoded, scenario.distribution);
          if (std::abs(check - rec.err) > kMassTol)
            throw Error("audit: population error " + std::to_string(rec.err) + " disagrees with recomputation " +
                        std::to_string(check));
        }
        records[task] = std::move(rec);
      } catch (...) {
        failures[task] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min(cfg.workers, tasks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return records;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.scenario << ',' << r.algorithm << ',' << r.m << ',' << r.trial << ',' << r.seed << ','
        << detail::format_real(r.err) << ',' << detail::format_real(r.bayes_err) << ','
        << detail::format_real(r.excess) << ',' << detail::format_real(r.beta_bound) << ','
        << detail::format_real(r.wall_ms) << '\n';
  }
}

inline void write_diagnostics_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << "scenario,algorithm,m,trial,train_loss0,selected_gamma,selected_relabeling\n";
  for (const auto& r : records)
    out << r.scenario << ',' << r.algorithm << ',' << r.m << ',' << r.trial << ','
        << detail::format_real(r.train_loss0) << ',' << detail::format_real(r.selected_gamma) << ','
        << r.selected_id << '\n';
}

inline std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ValidationError("csv: unexpected header '" + line + "'");
  std::vector<TrialRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 10) throw ValidationError("csv: line " + std::to_string(lineno) + " has wrong column count");
    try {
      TrialRecord r;
      r.scenario = cells[0];
      r.algorithm = cells[1];
      r.m = std::stoull(cells[2]);
      r.trial = std::stoull(cells[3]);
      r.seed = std::stoull(cells[4]);
      r.err = std::stod(cells[5]);
      r.bayes_err = std::stod(cells[6]);
      r.excess = std::stod(cells[7]);
      r.beta_bound = std::stod(cells[8]);
      r.wall_ms = std::stod(cells[9]);
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ValidationError("csv: line " + std::to_string(lineno) + " has a malformed field");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summaries

struct SummaryRow {
  std::string scenario;
  std::string algorithm;
  std::size_t m = 0;
  std::size_t count = 0;
  double mean_excess = 0.0;
  double median_excess = 0.0;
  double std_excess = 0.0;  ///< sample standard deviation; 0 for a single record
};

/// Mean, median and standard deviation of err - bayes_err per
/// (scenario, algorithm, m), sorted by that key.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ValidationError("summarize: no records");
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
  for (const auto& r : records) groups[{r.scenario, r.algorithm, r.m}].push_back(r.err - r.bayes_err);
  std::vector<SummaryRow> out;
  for (auto& [key, xs] : groups) {
    SummaryRow row;
    std::tie(row.scenario, row.algorithm, row.m) = key;
    row.count = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    row.mean_excess = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - row.mean_excess) * (x - row.mean_excess);
    row.std_excess = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t h = xs.size() / 2;
    row.median_excess = xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
    out.push_back(std::move(row));
  }
  return out;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "scenario,algorithm,m,count,mean_excess,median_excess,std_excess\n";
  for (const auto& r : rows)
    out << r.scenario << ',' << r.algorithm << ',' << r.m << ',' << r.count << ','
        << detail::format_real(r.mean_excess) << ',' << detail::format_real(r.median_excess) << ','
        << detail::format_real(r.std_excess) << '\n';
}

// ---------------------------------------------------------------------------
// Run manifest

/// FNV-1a over the canonical (sorted-key) serialization of the config.
inline std::uint64_t config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline json run_manifest(const ExperimentConfig& cfg, std::size_t record_count) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg.source)));
  return json{{"version", kVersion},
              {"config_hash", hash},
              {"config", cfg.source},
              {"seed", cfg.seed},
              {"records", record_count},
              {"csv_header", kCsvHeader}};
}

}  // namespace agboost::harness
