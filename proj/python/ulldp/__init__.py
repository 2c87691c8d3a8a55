# Copyright 2026 The ulldp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""User-level locally private discrete distribution estimation."""

from ._ulldp import (
    alpha_brute_force,
    alpha_closed_form,
    amplified_epsilon,
    binomial_tail,
    choose_local_budget,
    compose_pure,
    estimate,
    preset_names,
    project_to_simplex,
    run_preset,
    tv_distance,
)

__all__ = [
    "alpha_brute_force",
    "alpha_closed_form",
    "amplified_epsilon",
    "binomial_tail",
    "choose_local_budget",
    "compose_pure",
    "estimate",
    "preset_names",
    "project_to_simplex",
    "run_preset",
    "tv_distance",
]
