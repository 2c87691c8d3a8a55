// Copyright 2026 The ulldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ulldp/experiment.hpp"

using namespace ulldp;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.k = 2;
  cfg.n = 60;
  cfg.m_list = {4, 8};
  cfg.eps_list = {0.9};
  cfg.dist.kind = DistSpec::Kind::two_point;
  cfg.dist.p = 0.6;
  cfg.algos = {Algo::auto_dispatch, Algo::one_sample_hr};
  cfg.seeds = {1, 2, 3};
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("grid cardinality and ordering") {
  const auto reports = run(tiny_config());
  CHECK(reports.size() == 2 * 2 * 1 * 3);
  const std::string csv = csv_string(reports, /*with_runtime=*/false);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "algo,regime,k,m,n,epsilon,seed,tv_error,runtime_ms");
  int rows = 0;
  std::string prev_key;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find('\r') == std::string::npos);
    // Sorted by (algo, m, epsilon, seed): the leading fields are comparable
    // as strings in this config.
    const std::string key = line.substr(0, line.find(",0."));
    CHECK(prev_key <= key);
    prev_key = key;
  }
  CHECK(rows == 12);
}

TEST_CASE("identical configs give bit-identical csv") {
  const ExperimentConfig cfg = tiny_config();
  const std::string a = csv_string(run(cfg), /*with_runtime=*/false);
  const std::string b = csv_string(run(cfg), /*with_runtime=*/false);
  CHECK(a == b);
}

TEST_CASE("parallel execution matches the serial run") {
  const ExperimentConfig cfg = tiny_config();
  const std::string serial = csv_string(run(cfg, 1), /*with_runtime=*/false);
  const std::string parallel = csv_string(run(cfg, 4), /*with_runtime=*/false);
  CHECK(serial == parallel);
}

TEST_CASE("csv round-trips the error values exactly") {
  const auto reports = run(tiny_config());
  const std::string csv = csv_string(reports, /*with_runtime=*/false);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  double mean = 0.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto last_comma = line.rfind(',');
    const auto prev_comma = line.rfind(',', last_comma - 1);
    mean += std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
    ++rows;
  }
  mean /= rows;
  double expected = 0.0;
  for (const auto& r : reports) expected += r.tv_error;
  expected /= static_cast<double>(reports.size());
  CHECK(std::abs(mean - expected) <= 1e-12);
}

TEST_CASE("auto reports carry the dispatcher's regime") {
  ExperimentConfig cfg = tiny_config();
  cfg.k = 6;
  cfg.n = 400;
  cfg.m_list = {2, 8};
  cfg.eps_list = {0.9, 2.5};
  cfg.dist.kind = DistSpec::Kind::uniform;
  cfg.algos = {Algo::auto_dispatch};
  cfg.seeds = {1};
  for (const auto& r : run(cfg)) {
    CHECK(r.regime == regime_name(dispatch_regime(r.k, r.m, r.epsilon)));
    CHECK(r.tv_error >= 0.0);
    CHECK(r.tv_error <= 1.0);
    CHECK(r.user_level_private);
  }
}

TEST_CASE("the item-level baseline is flagged") {
  ExperimentConfig cfg = tiny_config();
  cfg.algos = {Algo::all_sample_hr};
  cfg.seeds = {1};
  const auto reports = run(cfg);
  for (const auto& r : reports) CHECK_FALSE(r.user_level_private);
  const std::string json = json_string(reports);
  const auto parsed = nlohmann::json::parse(json);
  CHECK(parsed.is_array());
  CHECK(parsed.size() == reports.size());
  CHECK(parsed[0]["user_level_private"] == false);
  CHECK(parsed[0]["algo"] == "all_sample_hr");
  CHECK(parsed[0].contains("tv_error"));
}

TEST_CASE("empty seed list defaults to seed zero") {
  ExperimentConfig cfg = tiny_config();
  cfg.seeds.clear();
  cfg.m_list = {4};
  cfg.algos = {Algo::one_sample_hr};
  const auto reports = run(cfg);
  CHECK(reports.size() == 1);
  CHECK(reports[0].seed == 0);
}

TEST_CASE("config parsing accepts the flat format") {
  std::istringstream in(
      "# comment\n"
      "k = 8\n"
      "n = 500\n"
      "m = 4, 8\n"
      "epsilon = 0.9 2.0\n"
      "dist = uniform\n"
      "algo = auto, one_sample_hr\n"
      "constants = theory\n"
      "variant = noninteractive\n"
      "seeds = 1, 2\n");
  const ExperimentConfig cfg = parse_config(in, "inline");
  CHECK(cfg.k == 8);
  CHECK(cfg.n == 500);
  CHECK(cfg.m_list == std::vector<std::int64_t>{4, 8});
  CHECK(cfg.eps_list == std::vector<double>{0.9, 2.0});
  CHECK(cfg.algos.size() == 2);
  CHECK(cfg.constants == ConstantsPreset::theory);
  CHECK(cfg.variant == CoinVariant::noninteractive);
}

TEST_CASE("config parsing reports the offending line") {
  const auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_config(in, "cfg");
      FAIL("expected parse error");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      CHECK(msg.find(needle) != std::string::npos);
    }
  };
  expect_error("k = 2\nwhat\n", "cfg:2");
  expect_error("k = 2\nn = twelve\n", "expected an integer");
  expect_error("mystery = 1\n", "unknown key");
  expect_error("dist = gaussian\n", "unknown dist");
  expect_error("k = 2\nn = 10\nm = 4\nepsilon = 0.9\ndist = explicit 0.5 0.5 0.0\n",
               "length differs");
}

TEST_CASE("presets expose the figure configurations") {
  const ExperimentConfig left = preset_config("fig1-left");
  CHECK(left.k == 2);
  CHECK(left.n == 9000);
  CHECK(left.eps_list == std::vector<double>{0.9});
  CHECK(left.m_list == std::vector<std::int64_t>{32, 64, 128, 256, 512});
  CHECK(left.dist.kind == DistSpec::Kind::two_point);
  CHECK(left.dist.p == 0.6);
  CHECK(left.seeds.size() == 5);
  CHECK(left.algos.size() == 3);

  const ExperimentConfig middle = preset_config("fig1-middle");
  CHECK(middle.k == 32);
  CHECK(middle.n == 9000LL * 32);

  const ExperimentConfig f2l = preset_config("fig2-left");
  CHECK(f2l.k == 1000);
  CHECK(f2l.n == 600000);
  CHECK(f2l.m_list == std::vector<std::int64_t>{20});

  const ExperimentConfig small = preset_config("fig2-right-small");
  CHECK(small.n == preset_config("fig2-right").n / 10);

  CHECK(preset_names().size() == 10);
  CHECK_THROWS_AS(preset_config("fig9"), std::invalid_argument);
}

TEST_CASE("invalid configurations fail validation") {
  ExperimentConfig cfg = tiny_config();
  cfg.n = 0;
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg = tiny_config();
  cfg.eps_list = {-1.0};
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg = tiny_config();
  cfg.dist.kind = DistSpec::Kind::two_point;
  cfg.k = 3;
  cfg.dist.probs.clear();
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_SUITE_END();
