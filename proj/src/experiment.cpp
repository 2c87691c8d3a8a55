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

#include "ulldp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ulldp/baselines.hpp"
#include "ulldp/hadamard.hpp"

namespace ulldp {

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::auto_dispatch:
      return "auto";
    case Algo::high_privacy:
      return "high_privacy";
    case Algo::small_m:
      return "small_m";
    case Algo::medium_m:
      return "medium_m";
    case Algo::large_m:
      return "large_m";
    case Algo::one_sample_hr:
      return "one_sample_hr";
    case Algo::all_sample_hr:
      return "all_sample_hr";
  }
  return "unknown";
}

Algo algo_from_name(const std::string& name) {
  for (Algo a : {Algo::auto_dispatch, Algo::high_privacy, Algo::small_m, Algo::medium_m,
                 Algo::large_m, Algo::one_sample_hr, Algo::all_sample_hr}) {
    if (algo_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

Distribution DistSpec::realize(int k) const {
  switch (kind) {
    case Kind::uniform:
      return Distribution::uniform(k);
    case Kind::two_point:
      if (k != 2) {
        throw std::invalid_argument("two_point distribution requires k = 2");
      }
      return Distribution::two_point(p);
    case Kind::explicit_vector:
      if (static_cast<int>(probs.size()) != k) {
        throw std::invalid_argument("explicit distribution length differs from k");
      }
      return Distribution(probs);
  }
  throw std::invalid_argument("DistSpec: unknown kind");
}

std::string DistSpec::describe() const {
  switch (kind) {
    case Kind::uniform:
      return "uniform";
    case Kind::two_point:
      return "two_point " + std::to_string(p);
    case Kind::explicit_vector: {
      std::string s = "explicit";
      for (double x : probs) s += " " + std::to_string(x);
      return s;
    }
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (n < 1) throw std::invalid_argument("config: n must be positive");
  if (m_list.empty()) throw std::invalid_argument("config: m list is empty");
  for (auto m : m_list) {
    if (m < 1) throw std::invalid_argument("config: m values must be positive");
  }
  if (eps_list.empty()) throw std::invalid_argument("config: epsilon list is empty");
  for (double e : eps_list) {
    if (!(e > 0.0)) throw std::invalid_argument("config: epsilon values must be positive");
  }
  if (algos.empty()) throw std::invalid_argument("config: algorithm list is empty");
  dist.realize(k);  // throws on mismatch
}

namespace {

constexpr std::uint64_t kSampleStream = 0;
constexpr std::uint64_t kChannelStream = 1;

double subset_mass(const Distribution& truth, int row) {
  if (row < 0) return truth[0];  // plain coin estimate of p(symbol 0)
  return truth.mass([row](int x) { return hadamard_plus(row, x); });
}

ReportDiagnostics summarize(const Diagnostics& diag, const Distribution& truth) {
  ReportDiagnostics out;
  out.coin_runs = diag.coin_runs;
  out.degenerate_localizations = diag.degenerate_localizations;
  out.case_fallbacks = diag.case_fallbacks;
  out.conditional_fallbacks = diag.conditional_fallbacks;
  out.localization_total = static_cast<std::int64_t>(diag.localizations.size());
  for (const auto& rec : diag.localizations) {
    const double mass = subset_mass(truth, rec.row);
    if (mass >= rec.lo && mass <= rec.hi) ++out.localization_hits;
  }
  return out;
}

}  // namespace

EstimateReport run_cell(const ExperimentConfig& cfg, Algo algo, std::int64_t m,
                        double epsilon, std::uint64_t seed) {
  const Distribution truth = cfg.dist.realize(cfg.k);
  const Rng root(seed);
  const SimulatedUserSource users(truth, m, static_cast<std::size_t>(cfg.n),
                                  root.derive(kSampleStream));
  const Rng channel_rng = root.derive(kChannelStream)
                              .derive(static_cast<std::uint64_t>(algo))
                              .derive(static_cast<std::uint64_t>(m))
                              .derive(std::bit_cast<std::uint64_t>(epsilon));

  EstimateReport report;
  report.algo = algo;
  report.k = cfg.k;
  report.m = m;
  report.n = cfg.n;
  report.epsilon = epsilon;
  report.seed = seed;

  EstimatorConfig est_cfg{cfg.constants, cfg.variant};
  Diagnostics diag;
  const auto start = std::chrono::steady_clock::now();
  Distribution estimate = Distribution::uniform(cfg.k);
  switch (algo) {
    case Algo::auto_dispatch: {
      EstimateResult result = ulldp::estimate(users, epsilon, est_cfg, channel_rng);
      estimate = std::move(result.estimate);
      diag = std::move(result.diag);
      report.regime = regime_name(result.regime);
      break;
    }
    case Algo::high_privacy:
      estimate = estimate_high_privacy(users, epsilon, est_cfg, channel_rng, &diag);
      report.regime = regime_name(Regime::high_privacy);
      break;
    case Algo::small_m:
      estimate = estimate_small_m(users, epsilon, est_cfg, channel_rng, &diag);
      report.regime = regime_name(Regime::small_m);
      break;
    case Algo::medium_m:
      estimate = estimate_medium_m(users, epsilon, est_cfg, channel_rng, &diag);
      report.regime = regime_name(Regime::medium_m);
      break;
    case Algo::large_m:
      estimate = estimate_large_m(users, epsilon, est_cfg, channel_rng, &diag);
      report.regime = regime_name(Regime::large_m);
      break;
    case Algo::one_sample_hr:
      estimate = one_sample_hr(users, epsilon, channel_rng);
      report.regime = "one_sample_hr";
      break;
    case Algo::all_sample_hr:
      estimate = all_sample_hr(users, epsilon, channel_rng);
      report.regime = "all_sample_hr";
      report.user_level_private = false;  // item-level only: per-user level is m*eps
      break;
  }
  const auto stop = std::chrono::steady_clock::now();
  report.runtime_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
          .count();
  report.tv_error = tv_distance(estimate, truth);
  report.estimate = estimate.probs();
  report.diag = summarize(diag, truth);
  return report;
}

std::vector<EstimateReport> run(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  struct Cell {
    Algo algo;
    std::int64_t m;
    double epsilon;
    std::uint64_t seed;
  };
  std::vector<std::uint64_t> seeds = cfg.seeds;
  if (seeds.empty()) seeds.push_back(0);

  std::vector<Algo> algos = cfg.algos;
  std::sort(algos.begin(), algos.end(),
            [](Algo a, Algo b) { return algo_name(a) < algo_name(b); });
  std::vector<std::int64_t> ms = cfg.m_list;
  std::sort(ms.begin(), ms.end());
  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.begin(), eps.end());
  std::vector<std::uint64_t> sorted_seeds = seeds;
  std::sort(sorted_seeds.begin(), sorted_seeds.end());

  std::vector<Cell> cells;
  for (Algo a : algos) {
    for (auto m : ms) {
      for (double e : eps) {
        for (auto s : sorted_seeds) cells.push_back({a, m, e, s});
      }
    }
  }

  std::vector<EstimateReport> reports(cells.size());
  if (jobs <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Cell& c = cells[i];
      reports[i] = run_cell(cfg, c.algo, c.m, c.epsilon, c.seed);
    }
    return reports;
  }

  std::atomic<std::size_t> next{0};
  const int workers = std::min<int>(jobs, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        const Cell& c = cells[i];
        reports[i] = run_cell(cfg, c.algo, c.m, c.epsilon, c.seed);
      }
    });
  }
  for (auto& t : pool) t.join();
  return reports;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_runtime(double ms, bool with_runtime) {
  if (!with_runtime) return "0.000";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

std::vector<const EstimateReport*> sorted_view(const std::vector<EstimateReport>& reports) {
  std::vector<const EstimateReport*> view;
  view.reserve(reports.size());
  for (const auto& r : reports) view.push_back(&r);
  std::stable_sort(view.begin(), view.end(),
                   [](const EstimateReport* a, const EstimateReport* b) {
                     const std::string an = algo_name(a->algo);
                     const std::string bn = algo_name(b->algo);
                     if (an != bn) return an < bn;
                     if (a->m != b->m) return a->m < b->m;
                     if (a->epsilon != b->epsilon) return a->epsilon < b->epsilon;
                     return a->seed < b->seed;
                   });
  return view;
}

}  // namespace

void write_csv(const std::vector<EstimateReport>& reports, std::ostream& out,
               bool with_runtime) {
  out << "algo,regime,k,m,n,epsilon,seed,tv_error,runtime_ms\n";
  for (const EstimateReport* r : sorted_view(reports)) {
    out << algo_name(r->algo) << ',' << r->regime << ',' << r->k << ',' << r->m << ','
        << r->n << ',' << format_double(r->epsilon) << ',' << r->seed << ','
        << format_double(r->tv_error) << ',' << format_runtime(r->runtime_ms, with_runtime)
        << '\n';
  }
}

std::string csv_string(const std::vector<EstimateReport>& reports, bool with_runtime) {
  std::ostringstream out;
  write_csv(reports, out, with_runtime);
  return out.str();
}

std::string json_string(const std::vector<EstimateReport>& reports, bool with_runtime) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EstimateReport* r : sorted_view(reports)) {
    nlohmann::json j;
    j["algo"] = algo_name(r->algo);
    j["regime"] = r->regime;
    j["k"] = r->k;
    j["m"] = r->m;
    j["n"] = r->n;
    j["epsilon"] = r->epsilon;
    j["seed"] = r->seed;
    j["tv_error"] = r->tv_error;
    j["runtime_ms"] = with_runtime ? r->runtime_ms : 0.0;
    j["user_level_private"] = r->user_level_private;
    j["diagnostics"] = {
        {"coin_runs", r->diag.coin_runs},
        {"degenerate_localizations", r->diag.degenerate_localizations},
        {"case_fallbacks", r->diag.case_fallbacks},
        {"conditional_fallbacks", r->diag.conditional_fallbacks},
        {"localization_total", r->diag.localization_total},
        {"localization_hits", r->diag.localization_hits},
    };
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

[[noreturn]] void config_error(const std::string& origin, int line, const std::string& msg) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& origin, int line, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    config_error(origin, line, "expected a number, got '" + tok + "'");
  }
}

std::int64_t parse_int(const std::string& origin, int line, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    config_error(origin, line, "expected an integer, got '" + tok + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  cfg.algos.clear();
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error(origin, line_no, "expected 'key = value'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (value.empty()) config_error(origin, line_no, "empty value for '" + key + "'");
    const std::vector<std::string> tokens = split_tokens(value);

    if (key == "k") {
      cfg.k = static_cast<int>(parse_int(origin, line_no, value));
    } else if (key == "n") {
      cfg.n = parse_int(origin, line_no, value);
    } else if (key == "m") {
      cfg.m_list.clear();
      for (const auto& t : tokens) cfg.m_list.push_back(parse_int(origin, line_no, t));
    } else if (key == "epsilon") {
      cfg.eps_list.clear();
      for (const auto& t : tokens) cfg.eps_list.push_back(parse_real(origin, line_no, t));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& t : tokens) {
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(origin, line_no, t)));
      }
    } else if (key == "dist") {
      if (tokens[0] == "uniform") {
        cfg.dist.kind = DistSpec::Kind::uniform;
      } else if (tokens[0] == "two_point") {
        if (tokens.size() != 2) config_error(origin, line_no, "two_point needs one value");
        cfg.dist.kind = DistSpec::Kind::two_point;
        cfg.dist.p = parse_real(origin, line_no, tokens[1]);
      } else if (tokens[0] == "explicit") {
        if (tokens.size() < 3) config_error(origin, line_no, "explicit needs >= 2 values");
        cfg.dist.kind = DistSpec::Kind::explicit_vector;
        cfg.dist.probs.clear();
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          cfg.dist.probs.push_back(parse_real(origin, line_no, tokens[i]));
        }
      } else {
        config_error(origin, line_no, "unknown dist '" + tokens[0] + "'");
      }
    } else if (key == "algo") {
      cfg.algos.clear();
      for (const auto& t : tokens) {
        try {
          cfg.algos.push_back(algo_from_name(t));
        } catch (const std::exception& e) {
          config_error(origin, line_no, e.what());
        }
      }
    } else if (key == "constants") {
      if (value == "theory") {
        cfg.constants = ConstantsPreset::theory;
      } else if (value == "experiment") {
        cfg.constants = ConstantsPreset::experiment;
      } else {
        config_error(origin, line_no, "constants must be 'theory' or 'experiment'");
      }
    } else if (key == "variant") {
      if (value == "interactive") {
        cfg.variant = CoinVariant::interactive;
      } else if (value == "noninteractive") {
        cfg.variant = CoinVariant::noninteractive;
      } else {
        config_error(origin, line_no, "variant must be 'interactive' or 'noninteractive'");
      }
    } else {
      config_error(origin, line_no, "unknown key '" + key + "'");
    }
  }
  if (cfg.algos.empty()) cfg.algos.push_back(Algo::auto_dispatch);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in, path);
}

namespace {

ExperimentConfig figure_base() {
  ExperimentConfig cfg;
  cfg.algos = {Algo::auto_dispatch, Algo::one_sample_hr, Algo::all_sample_hr};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.constants = ConstantsPreset::experiment;
  cfg.variant = CoinVariant::interactive;
  return cfg;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name) {
  std::string base = name;
  bool small = false;
  constexpr const char* kSmallSuffix = "-small";
  if (base.size() > 6 && base.substr(base.size() - 6) == kSmallSuffix) {
    small = true;
    base = base.substr(0, base.size() - 6);
  }
  ExperimentConfig cfg = figure_base();
  if (base == "fig1-left") {
    cfg.k = 2;
    cfg.n = 9000;
    cfg.eps_list = {0.9};
    cfg.m_list = {32, 64, 128, 256, 512};
    cfg.dist.kind = DistSpec::Kind::two_point;
    cfg.dist.p = 0.6;
  } else if (base == "fig1-middle") {
    cfg.k = 32;
    cfg.n = 9000LL * 32;
    cfg.eps_list = {0.9};
    cfg.m_list = {32, 64, 128, 256, 512};
  } else if (base == "fig2-left") {
    cfg.k = 1000;
    cfg.n = 600LL * 1000;
    cfg.m_list = {20};
    cfg.eps_list = {1, 2, 3, 4};
  } else if (base == "fig2-middle") {
    cfg.k = 500;
    cfg.n = 1200LL * 500;
    cfg.m_list = {128};
    cfg.eps_list = {1, 2, 3, 4, 5, 6};
  } else if (base == "fig2-right") {
    cfg.k = 200;
    cfg.n = 1200LL * 200;
    cfg.m_list = {256};
    cfg.eps_list = {1, 2, 3, 4, 5, 6};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  if (small) cfg.n = std::max<std::int64_t>(1, cfg.n / 10);
  return cfg;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const char* base :
       {"fig1-left", "fig1-middle", "fig2-left", "fig2-middle", "fig2-right"}) {
    names.emplace_back(base);
    names.emplace_back(std::string(base) + "-small");
  }
  return names;
}

}  // namespace ulldp
