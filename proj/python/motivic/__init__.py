"""Motivic measures on toric varieties: classes, measures and check runs."""

import json
import os

from ._core import MotivicError, corpus_recipe, normalize, report_version
from . import _core

__all__ = [
    "MotivicError",
    "normalize",
    "evaluate",
    "fan_info",
    "check_corpus",
    "check_suite",
    "corpus_recipe",
    "report_version",
]


def evaluate(expr, measures=("euler", "e"), relations=None):
    """Normalized class and measure values of an expression, as strings."""
    return json.loads(_core._evaluate(expr, list(measures), relations))


def fan_info(fan):
    """Properties and class of a builtin fan name, or a fan given as a dict."""
    spec = fan if isinstance(fan, str) else json.dumps(fan)
    return json.loads(_core._fan_info(spec))


def check_corpus(seed, size, measures=("euler", "e"), depth=3, kinds=()):
    """Runs the seeded corpus checks and returns the JSON report as a dict."""
    return json.loads(_core._check_corpus(seed, size, list(measures), depth, list(kinds)))


def check_suite(suite, measures=("euler", "e"), depth=3):
    """Runs a suite given as a path or a dict."""
    base = "."
    if isinstance(suite, (str, os.PathLike)):
        base = os.path.dirname(os.fspath(suite)) or "."
        with open(suite) as fh:
            suite = json.load(fh)
    return json.loads(_core._check_suite(json.dumps(suite), list(measures), depth, base))
