"""Exact polyhedral calculus for suprema of convex functions.

Thin wrapper over the C++ core.  Scenario, family, program and polyhedron
documents follow the JSON forms used by the `supdiff` CLI; rationals travel
as [numerator, denominator] pairs.
"""

import json

try:
    from ._supdiff import (
        dimension_cap,
        oracle_normal_cone as _oracle_normal_cone,
        oracle_solve as _oracle_solve,
        oracle_subdifferential as _oracle_subdifferential,
        run_query as _run_query,
        run_scenario as _run_scenario,
        run_suite as _run_suite,
    )
except ImportError:  # flat layout in a development build tree
    from _supdiff import (
        dimension_cap,
        oracle_normal_cone as _oracle_normal_cone,
        oracle_solve as _oracle_solve,
        oracle_subdifferential as _oracle_subdifferential,
        run_query as _run_query,
        run_scenario as _run_scenario,
        run_suite as _run_suite,
    )

__all__ = [
    "dimension_cap",
    "run_query",
    "run_scenario",
    "run_suite",
    "oracle_normal_cone",
    "oracle_subdifferential",
    "oracle_solve",
]


def run_query(scenario, query):
    """Run one query dict against a scenario dict; returns the report dict."""
    return json.loads(_run_query(json.dumps(scenario), json.dumps(query)))


def run_scenario(scenario):
    """Run a scenario's bundled queries; returns the aggregated report dict."""
    return json.loads(_run_scenario(json.dumps(scenario)))


def run_suite(directory):
    """Run every scenario in a directory; returns (exit_code, report dict)."""
    code, report = _run_suite(str(directory))
    return code, json.loads(report)


def oracle_normal_cone(family, point):
    return json.loads(_oracle_normal_cone(json.dumps(family), json.dumps(point)))


def oracle_subdifferential(family, point):
    return json.loads(_oracle_subdifferential(json.dumps(family), json.dumps(point)))


def oracle_solve(program):
    return json.loads(_oracle_solve(json.dumps(program)))
