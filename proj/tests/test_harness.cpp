#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "agboost/harness.hpp"

using namespace agboost;
using namespace agboost::harness;

namespace {

json small_config() {
  return json{{"scenario", "noisy-table"},
              {"instance", {{"N", 8}, {"n", 4}, {"s", 2}, {"eta", 0.2}}},
              {"algorithm", "agnostic_boost"},
              {"weak_learner", {{"type", "hadamard-oracle"}}},
              {"rounds", 40},
              {"m", {6, 9}},
              {"trials", 3},
              {"seed", 11}};
}

std::string csv_of(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_csv(records, out);
  return out.str();
}

void expect_field_error(json doc, const std::string& field) {
  try {
    parse_config(doc);
    ADD_FAILURE() << "expected a validation error naming " << field;
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("config." + field + ":"), std::string::npos) << e.what();
  }
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("agboost_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(AGBOOST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseConfig, AcceptsSmallConfig) {
  const auto cfg = parse_config(small_config());
  EXPECT_EQ(cfg.instance.N, 8u);
  EXPECT_EQ(cfg.m, (std::vector<std::size_t>{6, 9}));
  EXPECT_EQ(cfg.rounds, std::optional<std::size_t>(40));
  EXPECT_TRUE(cfg.weak_learner.oracle());
}

TEST(ParseConfig, NamesTheOffendingField) {
  auto doc = small_config();
  doc["scenario"] = "mystery";
  expect_field_error(doc, "scenario");

  doc = small_config();
  doc["instance"]["N"] = 0;
  expect_field_error(doc, "instance.N");

  doc = small_config();
  doc["instance"]["n"] = 6;
  expect_field_error(doc, "instance.n");

  doc = small_config();
  doc["m"] = {2};
  expect_field_error(doc, "m");

  doc = small_config();
  doc["m"] = {93};
  expect_field_error(doc, "m");

  doc = small_config();
  doc["delta"] = 1.5;
  expect_field_error(doc, "delta");

  doc = small_config();
  doc["trials"] = -1;
  expect_field_error(doc, "trials");

  doc = small_config();
  doc["weak_learner"] = {{"type", "hadamard"}};
  expect_field_error(doc, "weak_learner.m0");

  doc = small_config();
  doc["scenario"] = "hard-instance";
  doc["instance"]["d"] = 5;
  doc["instance"]["L"] = 0.2;
  doc["instance"]["instance_m"] = 100;
  expect_field_error(doc, "instance.instance_m");

  EXPECT_THROW(parse_config(json::array()), ValidationError);
}

TEST(RunExperiment, ZeroTrialsGiveEmptyOutput) {
  auto doc = small_config();
  doc["trials"] = 0;
  const auto records = run_experiment(parse_config(doc));
  EXPECT_TRUE(records.empty());
  EXPECT_EQ(csv_of(records), std::string(kCsvHeader) + "\n");
}

TEST(RunExperiment, CsvIsByteIdenticalAcrossRunsAndWorkers) {
  auto cfg = parse_config(small_config());
  const std::string first = csv_of(run_experiment(cfg));
  EXPECT_EQ(first, csv_of(run_experiment(cfg)));
  cfg.workers = 3;
  EXPECT_EQ(first, csv_of(run_experiment(cfg)));
}

TEST(RunExperiment, RecordsAreConsistent) {
  const auto cfg = parse_config(small_config());
  const auto records = run_experiment(cfg);
  ASSERT_EQ(records.size(), 6u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    EXPECT_EQ(r.m, cfg.m[i / 3]);
    EXPECT_EQ(r.trial, i % 3);
    EXPECT_EQ(r.seed, derive_seed(cfg.seed, r.m, r.trial));
    EXPECT_NEAR(r.bayes_err, 0.2, 1e-12);
    EXPECT_DOUBLE_EQ(r.excess, r.err - r.bayes_err);
    EXPECT_GE(r.excess, -1e-12);
    EXPECT_GT(r.beta_bound, 0.0);
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(RunExperiment, BaselinesRun) {
  for (const char* algo : {"erm", "weak-only", "adaboost"}) {
    auto doc = small_config();
    doc["algorithm"] = algo;
    const auto records = run_experiment(parse_config(doc));
    ASSERT_EQ(records.size(), 6u) << algo;
    for (const auto& r : records) EXPECT_GE(r.excess, -1e-12) << algo;
  }
}

TEST(RunExperiment, ErmGuardOnLargeUniverse) {
  auto doc = small_config();
  doc["algorithm"] = "erm";
  doc["instance"]["N"] = 21;
  doc["weak_learner"]["type"] = "stump-oracle";
  EXPECT_THROW(run_experiment(parse_config(doc)), GuardError);
}

TEST(BuildScenario, HardInstanceAndRealizable) {
  auto doc = small_config();
  doc["scenario"] = "hard-instance";
  doc["instance"] = {{"d", 5}, {"L", 0.2}};
  doc["weak_learner"]["type"] = "stump-oracle";
  const auto hard = build_scenario(parse_config(doc));
  EXPECT_NEAR(hard.bayes_error, 0.2, 1e-12);

  doc = small_config();
  doc["scenario"] = "hadamard-realizable";
  doc["instance"]["eta"] = 0.0;
  const auto real = build_scenario(parse_config(doc));
  EXPECT_DOUBLE_EQ(real.bayes_error, 0.0);
}

TEST(BuildScenario, CustomDistributionFile) {
  const auto dir = scratch_dir("custom");
  const auto path = dir / "dist.json";
  std::ofstream(path) << R"({"mass_pos": [0.5, 0.1], "mass_neg": [0.1, 0.3]})";
  auto doc = small_config();
  doc["scenario"] = "custom";
  doc["instance"] = {{"distribution_file", path.string()}};
  doc["weak_learner"]["type"] = "stump-oracle";
  const auto sc = build_scenario(parse_config(doc));
  EXPECT_NEAR(sc.bayes_error, 0.2, 1e-12);
  std::filesystem::remove_all(dir);
}

TEST(SampleFrom, FollowsTheTable) {
  const DiscreteDistribution dist({0.1, 0.4}, {0.3, 0.2});
  Rng rng(5);
  const std::size_t m = 100000;
  const Dataset s = sample_from(dist, m, rng);
  std::vector<double> freq(4, 0.0);
  for (std::size_t i = 0; i < m; ++i) freq[2 * s.point(i) + (s.label(i) > 0)] += 1.0 / m;
  const std::vector<double> expected{0.3, 0.1, 0.2, 0.4};
  for (std::size_t c = 0; c < 4; ++c)
    EXPECT_NEAR(freq[c], expected[c], 4.0 * std::sqrt(expected[c] * (1 - expected[c]) / m));
}

TEST(Csv, RoundTrip) {
  const auto records = run_experiment(parse_config(small_config()));
  std::istringstream in(csv_of(records));
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].seed, records[i].seed);
    EXPECT_EQ(back[i].err, records[i].err);
    EXPECT_EQ(back[i].beta_bound, records[i].beta_bound);
  }
  std::istringstream bad("scenario,algorithm\n");
  EXPECT_THROW(read_csv(bad), ValidationError);
  std::istringstream short_row(std::string(kCsvHeader) + "\na,b,1\n");
  EXPECT_THROW(read_csv(short_row), ValidationError);
}

TEST(Summarize, SingleRecordHasZeroSpread) {
  TrialRecord r{"s", "a", 9, 0, 0, 0.3, 0.2, 0.1, 0.0, 0.0};
  const auto rows = summarize({r});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].mean_excess, 0.1, 1e-15);
  EXPECT_NEAR(rows[0].median_excess, 0.1, 1e-15);
  EXPECT_EQ(rows[0].std_excess, 0.0);
}

TEST(Summarize, SymmetricPair) {
  TrialRecord a{"s", "a", 9, 0, 0, 0.3, 0.2, 0.1, 0.0, 0.0};
  TrialRecord b{"s", "a", 9, 1, 0, 0.1, 0.2, -0.1, 0.0, 0.0};
  const auto rows = summarize({a, b});
  EXPECT_NEAR(rows[0].mean_excess, 0.0, 1e-15);
  EXPECT_NEAR(rows[0].median_excess, 0.0, 1e-15);
  EXPECT_NEAR(rows[0].std_excess, std::sqrt(0.02), 1e-15);
}

TEST(Summarize, MatchesDirectComputationAndGroups) {
  Rng rng(100);
  std::vector<TrialRecord> records;
  std::vector<double> xs;
  for (std::size_t i = 0; i < 100; ++i) {
    TrialRecord r{"s", "a", 27, i, 0, 0.2 + 0.3 * rng.uniform(), 0.2, 0.0, 0.0, 0.0};
    xs.push_back(r.err - r.bayes_err);
    records.push_back(r);
  }
  records.push_back({"s", "a", 9, 0, 0, 0.5, 0.2, 0.3, 0.0, 0.0});
  const auto rows = summarize(records);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].m, 9u);
  const auto& row = rows[1];
  double mean = 0.0;
  for (double x : xs) mean += x / 100.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  std::sort(xs.begin(), xs.end());
  EXPECT_EQ(row.count, 100u);
  EXPECT_NEAR(row.mean_excess, mean, 1e-12);
  EXPECT_NEAR(row.std_excess, std::sqrt(ss / 99.0), 1e-12);
  EXPECT_NEAR(row.median_excess, 0.5 * (xs[49] + xs[50]), 1e-12);
  EXPECT_THROW(summarize({}), ValidationError);
}

TEST(Manifest, CarriesHashAndVersion) {
  const auto cfg = parse_config(small_config());
  const auto man = run_manifest(cfg, 6);
  EXPECT_EQ(man.at("version"), kVersion);
  EXPECT_EQ(man.at("records"), 6);
  EXPECT_EQ(man.at("config_hash").get<std::string>().size(), 16u);
  EXPECT_EQ(man, run_manifest(parse_config(small_config()), 6));
  auto other = small_config();
  other["seed"] = 12;
  EXPECT_NE(man.at("config_hash"), run_manifest(parse_config(other), 6).at("config_hash"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  const auto good = dir / "good.json";
  const auto bad = dir / "bad.json";
  const auto guard = dir / "guard.json";
  const auto out = dir / "out.csv";
  std::ofstream(good) << small_config().dump();
  auto doc = small_config();
  doc["instance"]["eta"] = 0.7;
  std::ofstream(bad) << doc.dump();
  doc = small_config();
  doc["algorithm"] = "erm";
  doc["instance"]["N"] = 21;
  doc["weak_learner"]["type"] = "stump-oracle";
  std::ofstream(guard) << doc.dump();

  EXPECT_EQ(run_cli("run " + good.string() + " --out " + out.string() + " --workers 2"), 0);
  ASSERT_TRUE(std::filesystem::exists(out));
  EXPECT_TRUE(std::filesystem::exists(out.string() + ".manifest.json"));
  {
    std::ifstream in(out);
    EXPECT_EQ(read_csv(in).size(), 6u);
  }
  EXPECT_EQ(run_cli("summarize " + out.string()), 0);
  EXPECT_EQ(run_cli("run " + bad.string() + " --out " + out.string()), 2);
  EXPECT_EQ(run_cli("run " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("run " + guard.string() + " --out " + out.string()), 3);
  EXPECT_EQ(run_cli("hard-instance --d 5 --L 0.2"), 0);
  EXPECT_EQ(run_cli("hard-instance --d 5 --L 0.2 --m 10"), 2);
  EXPECT_EQ(run_cli("bogus-verb"), 2);
  std::filesystem::remove_all(dir);
}
