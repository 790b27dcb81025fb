"""Fixed equilibria of point vortices in a polynomial background flow.

Problems are given as dicts (or JSON text, or a path to a JSON file) in the
same format the command line tool reads.
"""

import json
import os

from . import _core

__all__ = ["solve", "certify", "classify", "summary", "field", "table", "bounds", "config_bound"]
__version__ = "0.1.0"


def _problem_text(problem):
    if isinstance(problem, dict):
        return json.dumps(problem)
    if isinstance(problem, os.PathLike) or (isinstance(problem, str) and os.path.isfile(problem)):
        with open(problem, encoding="utf-8") as f:
            return f.read()
    return problem


def solve(problem, seed=0):
    return json.loads(_core.solve(_problem_text(problem), seed))


def certify(problem, seed=0):
    return json.loads(_core.certify(_problem_text(problem), seed))


def classify(problem, seed=0):
    return json.loads(_core.classify(_problem_text(problem), seed))


def summary(problem, seed=0):
    """("a/b/c", exit_code) for one problem."""
    return _core.summary(_problem_text(problem), seed)


def field(problem, seed=0, solution=-1, grid="-2,2,-2,2,41", part="total"):
    """Complex velocity on a grid: dict with x, y, values[iy, ix], mask."""
    return _core.field(_problem_text(problem), seed, solution, grid, part)


def table(batch, seed=0):
    return _core.table(os.fspath(batch), seed)


def bounds(m, n):
    return _core.bounds(m, n)


def config_bound(m, species_sizes):
    return int(_core.config_bound(m, list(species_sizes)))
