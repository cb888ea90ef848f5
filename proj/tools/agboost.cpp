#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "acceptance_suite.hpp"
#include "agboost/harness.hpp"

namespace {

using namespace agboost;
namespace h = agboost::harness;

constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<std::size_t> workers,
            std::optional<std::string> out_path) {
  auto cfg = h::load_config(config_path);
  if (seed) {
    cfg.seed = *seed;
    cfg.source["seed"] = *seed;
  }
  if (workers) {
    if (*workers == 0) throw ValidationError("--workers must be >= 1");
    cfg.workers = *workers;
  }
  if (out_path) cfg.output = *out_path;

  const auto records = h::run_experiment(cfg);
  {
    auto out = open_out(cfg.output);
    h::write_csv(records, out);
  }
  {
    auto out = open_out(cfg.output + ".manifest.json");
    out << h::run_manifest(cfg, records.size()).dump(2) << '\n';
  }
  {
    auto out = open_out(cfg.output + ".diag.csv");
    h::write_diagnostics_csv(records, out);
  }
  std::cerr << "wrote " << records.size() << " records to " << cfg.output << '\n';
  return 0;
}

int cmd_summarize(const std::string& csv_path, std::optional<std::string> out_path) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open '" + csv_path + "'");
  const auto rows = h::summarize(h::read_csv(in));
  if (out_path) {
    auto out = open_out(*out_path);
    h::write_summary_csv(rows, out);
  } else {
    h::write_summary_csv(rows, std::cout);
  }
  return 0;
}

int cmd_verify(std::optional<std::uint64_t> seed, std::optional<std::size_t> workers) {
  acceptance::Options opt;
  if (seed) opt.seed = *seed;
  if (workers) opt.workers = *workers;
  const auto results = acceptance::run_all(opt, std::cout);
  return acceptance::all_passed(results) ? 0 : 1;
}

int cmd_hard_instance(std::size_t d, double L, std::optional<std::size_t> m, std::uint64_t seed,
                      std::optional<std::string> out_path) {
  Rng rng(derive_seed(seed, 0x5ce7a210ULL));
  const double budget = static_cast<double>(m.value_or(min_admissible_m(d, L)));
  const auto inst = hard_instance(d, L, budget, std::nullopt, rng);
  const auto doc = h::hard_instance_json(inst).dump(2);
  if (out_path) {
    auto out = open_out(*out_path);
    out << doc << '\n';
  } else {
    std::cout << doc << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agnostic boosting experiments over finite domains"};
  app.set_version_flag("--version", std::string(h::kVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;

  std::string config_path, csv_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  auto* summarize = app.add_subcommand("summarize", "Excess-error summary of a results CSV");
  summarize->add_option("csv", csv_path, "Results CSV")->required();
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  std::size_t d = 0;
  double L = 0.0;
  std::optional<std::size_t> m;
  auto* hard = app.add_subcommand("hard-instance", "Print a hard distribution as JSON");
  hard->add_option("--d", d, "Domain size")->required();
  hard->add_option("--L", L, "Optimal error")->required();
  hard->add_option("--m", m, "Sample budget (default: minimal admissible)");

  for (auto* sub : {run, summarize, verify, hard}) {
    sub->add_option("--seed", seed, "Master seed override");
    sub->add_option("--workers", workers, "Worker threads");
    sub->add_option("--out", out, "Output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(config_path, seed, workers, out);
    if (*summarize) return cmd_summarize(csv_path, out);
    if (*verify) return cmd_verify(seed, workers);
    if (*hard) return cmd_hard_instance(d, L, m, seed.value_or(0), out);
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
