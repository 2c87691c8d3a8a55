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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ulldp/baselines.hpp"
#include "ulldp/channels.hpp"
#include "ulldp/errors.hpp"
#include "ulldp/estimators.hpp"
#include "ulldp/experiment.hpp"
#include "ulldp/paninski.hpp"
#include "ulldp/shuffle.hpp"
#include "ulldp/verify.hpp"

namespace {

using namespace ulldp;

DistSpec parse_dist_flag(const std::string& text) {
  DistSpec spec;
  if (text == "uniform") {
    spec.kind = DistSpec::Kind::uniform;
    return spec;
  }
  if (text.rfind("two_point:", 0) == 0) {
    spec.kind = DistSpec::Kind::two_point;
    spec.p = std::stod(text.substr(10));
    return spec;
  }
  // Comma-separated explicit vector.
  spec.kind = DistSpec::Kind::explicit_vector;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) spec.probs.push_back(std::stod(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (spec.probs.size() < 2) {
    throw CLI::ValidationError("--dist", "expected uniform, two_point:<p>, or p1,p2,...");
  }
  return spec;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to " + out_path);
  out << text;
}

int run_estimate(const ExperimentConfig& cfg, bool as_json, const std::string& out_path) {
  const auto reports = run(cfg);
  if (as_json) {
    emit(json_string(reports) + "\n", out_path);
    return 0;
  }
  std::string text;
  for (const auto& r : reports) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "algo=%s regime=%s k=%d m=%lld n=%lld eps=%g seed=%llu tv_error=%.6f "
                  "time=%.1fms%s\n",
                  algo_name(r.algo).c_str(), r.regime.c_str(), r.k,
                  static_cast<long long>(r.m), static_cast<long long>(r.n), r.epsilon,
                  static_cast<unsigned long long>(r.seed), r.tv_error, r.runtime_ms,
                  r.user_level_private ? "" : " [item-level only]");
    text += line;
    text += "  estimate:";
    for (double v : r.estimate) {
      std::snprintf(line, sizeof(line), " %.6f", v);
      text += line;
    }
    text += "\n";
  }
  emit(text, out_path);
  return 0;
}

int run_check_theory() {
  int failures = 0;
  const auto report = [&failures](const std::string& name, bool ok, double detail) {
    std::printf("%s %s (%.3g)\n", ok ? "PASS" : "FAIL", name.c_str(), detail);
    if (!ok) ++failures;
  };

  // Perturbed-uniform second-moment identity, exhaustively over signs/pairs.
  double worst_alpha = 0.0;
  double worst_mean = 0.0;
  for (int k : {2, 4}) {
    for (std::int64_t m : {1, 2, 3}) {
      for (double gamma : {0.05, 0.1}) {
        for (int mask = 0; mask < (1 << (k / 2)); ++mask) {
          std::vector<int> z(static_cast<std::size_t>(k / 2));
          for (int i = 0; i < k / 2; ++i) z[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
          for (int i = 1; i <= k / 2; ++i) {
            worst_alpha = std::max(worst_alpha,
                                   std::abs(alpha_brute_force(k, m, gamma, z, i) -
                                            alpha_closed_form(k, m, gamma)));
            worst_mean = std::max(worst_mean,
                                  std::abs(likelihood_ratio_mean(k, m, gamma, z, i) - 1.0));
          }
        }
      }
    }
  }
  report("alpha identity (brute force vs closed form)", worst_alpha <= 1e-10, worst_alpha);
  report("likelihood ratios average to one", worst_mean <= 1e-12, worst_mean);

  // Randomizer battery at exact levels.
  double worst_slack = 0.0;
  for (double eps : {0.5, 1.0, 2.0}) {
    worst_slack = std::max(worst_slack,
                           max_log_ratio(FlipBitChannel(FlipChannel::for_budget(eps))) - eps);
    for (int d : {2, 8, 16}) {
      worst_slack =
          std::max(worst_slack,
                   max_log_ratio(OneHotFlipChannel(d, FlipChannel::for_budget(eps / 2))) - eps);
    }
    for (int alphabet : {3, 7, 15}) {
      const HadamardResponseChannel hr(alphabet, true, eps);
      worst_slack = std::max(worst_slack, max_log_ratio(HadamardResponseTable(hr)) - eps);
    }
  }
  report("randomizer battery within declared budgets", worst_slack <= 1e-9, worst_slack);
  return failures == 0 ? 0 : 1;
}

int run_verify_ldp(const std::string& channel, double eps, int d, int alphabet, bool bot) {
  double ratio = 0.0;
  if (channel == "flip_bit") {
    ratio = max_log_ratio(FlipBitChannel(FlipChannel::for_budget(eps)));
  } else if (channel == "onehot") {
    ratio = max_log_ratio(OneHotFlipChannel(d, FlipChannel::for_budget(eps / 2.0)));
  } else if (channel == "hr") {
    const HadamardResponseChannel hr(alphabet, bot, eps);
    ratio = max_log_ratio(HadamardResponseTable(hr));
  } else {
    throw CLI::ValidationError("--channel", "expected flip_bit, onehot, or hr");
  }
  const bool ok = ratio <= eps + 1e-9;
  std::printf("channel=%s epsilon=%g max_log_ratio=%.12f %s\n", channel.c_str(), eps,
              ratio, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"user-level locally private discrete distribution estimation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 0;
  std::string out_path;
  std::string preset;
  std::string config_path;
  int jobs = 1;
  bool as_json = false;
  app.add_option("--seed", seed, "default random seed")->capture_default_str();
  app.add_option("--out", out_path, "output path (stdout when omitted)");
  app.add_option("--preset", preset, "named experiment preset");
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--jobs", jobs, "parallel cells")->capture_default_str();
  app.add_flag("--json", as_json, "emit reports as JSON");

  // estimate: a single run.
  auto* estimate_cmd = app.add_subcommand("estimate", "run one estimation cell");
  int k = 2;
  std::int64_t m = 32;
  std::int64_t n = 1000;
  double epsilon = 0.9;
  std::string dist_text = "uniform";
  std::string algo_text = "auto";
  std::string constants_text = "experiment";
  std::string variant_text = "interactive";
  estimate_cmd->add_option("--k", k, "alphabet size")->capture_default_str();
  estimate_cmd->add_option("--m", m, "samples per user")->capture_default_str();
  estimate_cmd->add_option("--n", n, "number of users")->capture_default_str();
  estimate_cmd->add_option("--epsilon", epsilon, "privacy budget")->capture_default_str();
  estimate_cmd->add_option("--dist", dist_text, "uniform | two_point:<p> | p1,p2,...")
      ->capture_default_str();
  estimate_cmd->add_option("--algo", algo_text, "auto | high_privacy | small_m | medium_m "
                                                "| large_m | one_sample_hr | all_sample_hr")
      ->capture_default_str();
  estimate_cmd->add_option("--constants", constants_text, "experiment | theory")
      ->capture_default_str();
  estimate_cmd->add_option("--variant", variant_text, "interactive | noninteractive")
      ->capture_default_str();

  // sweep: a preset or config grid to CSV.
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid and write CSV");
  bool no_timing = false;
  std::string json_out;
  sweep_cmd->add_flag("--no-timing", no_timing,
                      "zero the runtime column for bit-reproducible output");
  sweep_cmd->add_option("--json-out", json_out, "also write a JSON mirror to this path");

  // shuffle-budget: amplification calculator.
  auto* shuffle_cmd = app.add_subcommand("shuffle-budget", "shuffle amplification calculator");
  std::int64_t sh_n = 10000;
  double sh_delta = 1e-6;
  double eps_local = 0.0;
  double eps_target = 0.0;
  int sh_k = 2;
  std::int64_t sh_m = 1;
  shuffle_cmd->add_option("--n", sh_n, "number of users")->required();
  shuffle_cmd->add_option("--delta", sh_delta, "delta")->required();
  shuffle_cmd->add_option("--eps-local", eps_local, "local budget to amplify");
  shuffle_cmd->add_option("--eps-target", eps_target, "central target to invert");
  shuffle_cmd->add_option("--k", sh_k, "alphabet size (for the regime hint)");
  shuffle_cmd->add_option("--m", sh_m, "samples per user (for the regime hint)");

  auto* theory_cmd = app.add_subcommand("check-theory", "brute-force oracle battery");
  (void)theory_cmd;

  // verify-ldp: report the exact level of a named channel.
  auto* verify_cmd = app.add_subcommand("verify-ldp", "exact LDP level of a channel");
  std::string channel = "flip_bit";
  double v_eps = 1.0;
  int v_d = 4;
  int v_alphabet = 4;
  bool v_bot = false;
  verify_cmd->add_option("--channel", channel, "flip_bit | onehot | hr")
      ->capture_default_str();
  verify_cmd->add_option("--epsilon", v_eps, "claimed budget")->capture_default_str();
  verify_cmd->add_option("--d", v_d, "one-hot length")->capture_default_str();
  verify_cmd->add_option("--alphabet", v_alphabet, "hr alphabet size")->capture_default_str();
  verify_cmd->add_flag("--bot", v_bot, "append the null symbol to the hr alphabet");

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config_file(config_path);
      } else if (!preset.empty()) {
        cfg = preset_config(preset);
      } else {
        cfg.k = k;
        cfg.m_list = {m};
        cfg.n = n;
        cfg.eps_list = {epsilon};
        cfg.dist = parse_dist_flag(dist_text);
        cfg.algos = {algo_from_name(algo_text)};
        cfg.constants = constants_text == "theory" ? ConstantsPreset::theory
                                                   : ConstantsPreset::experiment;
        cfg.variant = variant_text == "noninteractive" ? CoinVariant::noninteractive
                                                       : CoinVariant::interactive;
        cfg.seeds = {seed};
      }
      return run_estimate(cfg, as_json, out_path);
    }
    if (sweep_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config_file(config_path);
      } else if (!preset.empty()) {
        cfg = preset_config(preset);
      } else {
        throw CLI::ValidationError("sweep", "needs --preset or --config");
      }
      const auto reports = run(cfg, jobs);
      if (as_json && out_path.empty()) {
        emit(json_string(reports, !no_timing) + "\n", "");
      } else {
        emit(csv_string(reports, !no_timing), out_path);
      }
      if (!json_out.empty()) emit(json_string(reports, !no_timing) + "\n", json_out);
      std::fprintf(stderr, "wrote %zu reports\n", reports.size());
      return 0;
    }
    if (shuffle_cmd->parsed()) {
      if (eps_local > 0.0) {
        const double amplified = amplified_epsilon(eps_local, sh_n, sh_delta);
        std::printf("eps_local=%g n=%lld delta=%g -> central eps=%.6f\n", eps_local,
                    static_cast<long long>(sh_n), sh_delta, amplified);
      }
      if (eps_target > 0.0) {
        const LocalBudgetChoice choice =
            choose_local_budget(eps_target, sh_delta, sh_n, sh_k, sh_m);
        const char* branch = choice.branch == LocalBudgetChoice::Branch::cap ? "cap"
                             : choice.branch == LocalBudgetChoice::Branch::small_eps
                                 ? "small_eps"
                             : choice.branch == LocalBudgetChoice::Branch::large_eps
                                 ? "large_eps"
                                 : "bisection";
      std::printf(
            "eps_target=%g n=%lld delta=%g -> eps_local=%.6f (branch=%s, regime %s, "
            "amplified=%.6f)\n",
            eps_target, static_cast<long long>(sh_n), sh_delta, choice.epsilon_local,
            branch, choice.regime_hint.c_str(),
            amplified_epsilon(choice.epsilon_local, sh_n, sh_delta));
      }
      if (eps_local <= 0.0 && eps_target <= 0.0) {
        throw CLI::ValidationError("shuffle-budget", "needs --eps-local or --eps-target");
      }
      return 0;
    }
    if (theory_cmd->parsed()) {
      return run_check_theory();
    }
    if (verify_cmd->parsed()) {
      return run_verify_ldp(channel, v_eps, v_d, v_alphabet, v_bot);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
