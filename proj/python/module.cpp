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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ulldp/baselines.hpp"
#include "ulldp/binomial.hpp"
#include "ulldp/channels.hpp"
#include "ulldp/distribution.hpp"
#include "ulldp/experiment.hpp"
#include "ulldp/paninski.hpp"
#include "ulldp/shuffle.hpp"

namespace py = pybind11;

namespace {

using namespace ulldp;

py::dict report_to_dict(const EstimateReport& r) {
  py::dict d;
  d["algo"] = algo_name(r.algo);
  d["regime"] = r.regime;
  d["k"] = r.k;
  d["m"] = r.m;
  d["n"] = r.n;
  d["epsilon"] = r.epsilon;
  d["seed"] = r.seed;
  d["tv_error"] = r.tv_error;
  d["runtime_ms"] = r.runtime_ms;
  d["user_level_private"] = r.user_level_private;
  d["estimate"] = r.estimate;
  py::dict diag;
  diag["coin_runs"] = r.diag.coin_runs;
  diag["degenerate_localizations"] = r.diag.degenerate_localizations;
  diag["case_fallbacks"] = r.diag.case_fallbacks;
  diag["conditional_fallbacks"] = r.diag.conditional_fallbacks;
  diag["localization_total"] = r.diag.localization_total;
  diag["localization_hits"] = r.diag.localization_hits;
  d["diagnostics"] = diag;
  return d;
}

DistSpec dist_from_arg(const py::object& dist, int k) {
  DistSpec spec;
  if (py::isinstance<py::str>(dist)) {
    const auto name = dist.cast<std::string>();
    if (name == "uniform") {
      spec.kind = DistSpec::Kind::uniform;
      return spec;
    }
    throw std::invalid_argument("dist: expected 'uniform' or a probability vector");
  }
  spec.kind = DistSpec::Kind::explicit_vector;
  spec.probs = dist.cast<std::vector<double>>();
  if (static_cast<int>(spec.probs.size()) != k) {
    throw std::invalid_argument("dist: length must equal k");
  }
  return spec;
}

py::dict estimate_simulated(int k, std::int64_t m, std::int64_t n, double epsilon,
                            const py::object& dist, const std::string& algo,
                            std::uint64_t seed, const std::string& constants,
                            const std::string& variant) {
  ExperimentConfig cfg;
  cfg.k = k;
  cfg.m_list = {m};
  cfg.n = n;
  cfg.eps_list = {epsilon};
  cfg.dist = dist_from_arg(dist, k);
  cfg.algos = {algo_from_name(algo)};
  cfg.constants =
      constants == "theory" ? ConstantsPreset::theory : ConstantsPreset::experiment;
  cfg.variant = variant == "noninteractive" ? CoinVariant::noninteractive
                                            : CoinVariant::interactive;
  cfg.seeds = {seed};
  return report_to_dict(run_cell(cfg, cfg.algos[0], m, epsilon, seed));
}

py::list run_preset_py(const std::string& name, int jobs) {
  py::list out;
  for (const auto& r : run(preset_config(name), jobs)) out.append(report_to_dict(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_ulldp, mod) {
  mod.doc() = "user-level locally private discrete distribution estimation";

  mod.def("tv_distance",
          [](const std::vector<double>& p, const std::vector<double>& q) {
            return tv_distance(p, q);
          },
          py::arg("p"), py::arg("q"), "half the l1 distance between two vectors");

  mod.def("project_to_simplex",
          [](const std::vector<double>& v) { return project_to_simplex(v).probs(); },
          py::arg("v"), "clip negatives and renormalize; uniform when nothing is left");

  mod.def("binomial_tail", &binomial_tail, py::arg("m"), py::arg("p"), py::arg("t"),
          "P[Z/m > t] for Z ~ Binomial(m, p), strict inequality");

  mod.def("amplified_epsilon", &amplified_epsilon, py::arg("eps_local"), py::arg("n"),
          py::arg("delta"), "central epsilon of n shuffled eps-local reports");

  mod.def("choose_local_budget",
          [](double eps_target, double delta, std::int64_t n, int k, std::int64_t m) {
            const LocalBudgetChoice c = choose_local_budget(eps_target, delta, n, k, m);
            py::dict d;
            d["epsilon_local"] = c.epsilon_local;
            d["regime_hint"] = c.regime_hint;
            return d;
          },
          py::arg("eps_target"), py::arg("delta"), py::arg("n"), py::arg("k"),
          py::arg("m"), "largest local budget whose amplified level meets the target");

  mod.def("compose_pure",
          [](const std::vector<double>& epsilons) {
            std::vector<PrivacyBudget> budgets;
            for (double e : epsilons) budgets.push_back({e, 0.0});
            return compose(budgets, CompositionMode::pure).epsilon;
          },
          py::arg("epsilons"));

  mod.def("alpha_closed_form", &alpha_closed_form, py::arg("k"), py::arg("m"),
          py::arg("gamma"));
  mod.def("alpha_brute_force", &alpha_brute_force, py::arg("k"), py::arg("m"),
          py::arg("gamma"), py::arg("z"), py::arg("flip_coordinate"));

  mod.def("estimate", &estimate_simulated, py::arg("k"), py::arg("m"), py::arg("n"),
          py::arg("epsilon"), py::arg("dist") = py::str("uniform"),
          py::arg("algo") = "auto", py::arg("seed") = 0,
          py::arg("constants") = "experiment", py::arg("variant") = "interactive",
          "simulate n users with m samples each and estimate under eps-LDP");

  mod.def("run_preset", &run_preset_py, py::arg("name"), py::arg("jobs") = 1,
          "run a named figure preset and return its reports");

  mod.def("preset_names", &preset_names);
}
