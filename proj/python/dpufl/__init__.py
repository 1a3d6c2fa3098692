# Copyright 2026 The dpufl Authors.
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

"""Differentially private uncapacitated facility location on HSTs."""

import json

from dpufl import _dpufl
from dpufl._dpufl import (  # noqa: F401
    evaluate_policy,
    expected_opt_per_leaf,
    opt,
    opt_tree,
    privacy_ledger,
    run_cli,
    two_point_cost_table,
)

__all__ = [
    "evaluate_policy",
    "expected_opt_per_leaf",
    "opt",
    "opt_tree",
    "privacy_ledger",
    "run_cli",
    "solve",
    "solve_tree",
    "two_point_cost_table",
]


def _as_text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(instance, epsilon, lam=1.5, seed=0, tree_seed=None, base=False):
    """Embeds `instance` (dict or JSON text) and solves it on the tree."""
    return json.loads(
        _dpufl.solve(_as_text(instance), epsilon, lam, seed, tree_seed, base))


def solve_tree(tree, clients, facility_cost, epsilon, seed=0, base=False,
               return_all_marked=False, leaf_only=False):
    """Solves on an HST given as a dict or JSON text."""
    return json.loads(
        _dpufl.solve_tree(_as_text(tree), list(clients), facility_cost, epsilon,
                          seed, base, return_all_marked, leaf_only))
