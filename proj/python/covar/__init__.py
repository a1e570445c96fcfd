"""Python front end for the covar library.

States are plain dicts mapping variable names to ints, Fractions or
"num/den" strings. Exact results come back as Fractions (or ``math.inf``).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Mapping, Optional, Union

from . import _core
from ._core import CovarError, DomainError, ParseError, PreconditionError

__all__ = [
    "CovarError",
    "DomainError",
    "ParseError",
    "PreconditionError",
    "pretty",
    "wp",
    "wlp",
    "rt",
    "expected_value",
    "covariance_upper_bounds",
    "covariance_lower_bounds",
    "rt_variance_upper_bounds",
    "variance",
    "check_invariant",
    "chain",
    "export_chain",
    "simulate",
    "estimate_covariance",
    "estimate_rt_variance",
]

Value = Union[int, str, Fraction]


def _state(state: Optional[Mapping[str, Value]]) -> str:
    return json.dumps({k: str(v) for k, v in (state or {}).items()}, sort_keys=True)


def _number(text: str) -> Union[Fraction, float]:
    if text in ("inf", "+inf"):
        return math.inf
    if text == "-inf":
        return -math.inf
    return Fraction(text)


def _bounds(raw: str) -> dict:
    out = json.loads(raw)
    for e in out["entries"]:
        e["value"] = _number(e["value"])
    return out


def pretty(program: str) -> str:
    return _core.pretty(program)


def wp(program: str, post: str, state=None, k: int = 0):
    return _number(_core.transform("wp", program, post, _state(state), k))


def wlp(program: str, post: str = "1", state=None, k: int = 0):
    return _number(_core.transform("wlp", program, post, _state(state), k))


def rt(program: str, post: str = "0", state=None, k: int = 0):
    return _number(_core.transform("rt", program, post, _state(state), k))


def expected_value(program: str, f: str, state=None, k: int = 0):
    """wp^k(f)/wlp^k(1), a lower bound that increases with k."""
    return _number(json.loads(_core.cond_expected_value(program, f, _state(state), k))["value"])


def covariance_upper_bounds(program, state, f, g, x, y, kmax):
    return _bounds(_core.covariance_upper_bounds(program, _state(state), f, g, x, y, kmax))


def covariance_lower_bounds(program, state, f, g, xf, xg, y, kmax):
    return _bounds(_core.covariance_lower_bounds(program, _state(state), f, g, xf, xg, y, kmax))


def rt_variance_upper_bounds(program, state, x, y="1", kmax=10):
    return _bounds(_core.rt_variance_upper_bounds(program, _state(state), x, y, kmax))


def variance(program, state, f, x=None, xf=None, y="1", kmax=10):
    out = json.loads(_core.variance_report(program, _state(state), f, x, xf, y, kmax))
    for side in ("upper", "lower"):
        if out[side] is not None:
            for e in out[side]["entries"]:
                e["value"] = _number(e["value"])
    return out


def check_invariant(condition, program, invariant, states, h="0"):
    """condition is "wp", "wlp" or "rt"; h is the wp post-expectation."""
    return json.loads(_core.check_invariant(condition, program, invariant, h, [_state(s) for s in states]))


def chain(program, state=None, t="tau", budget=10000):
    out = json.loads(_core.chain(program, _state(state), t, budget, ""))
    for key in ("expected_reward", "cond_expected_reward"):
        r = out[key]
        for field in ("exact", "lower", "upper", "reach_sink", "reach_violation"):
            if field in r:
                r[field] = _number(r[field])
    return out


def export_chain(program, state=None, t="tau", budget=10000, format="dot") -> str:
    if format not in ("dot", "json"):
        raise ValueError("format must be 'dot' or 'json'")
    return _core.chain(program, _state(state), t, budget, format)


def simulate(program, state=None, seed=0, step_limit=100000):
    return json.loads(_core.simulate(program, _state(state), seed, step_limit))


def _estimate(raw: str) -> dict:
    out = json.loads(raw)
    for key in ("value", "std_error"):
        if out.get(key) is not None:
            out[key] = float(out[key])
    return out


def estimate_covariance(program, state, f, g=None, n=10000, seed=0, step_limit=100000):
    return _estimate(_core.estimate_covariance(program, _state(state), f, g or f, n, seed, step_limit))


def estimate_rt_variance(program, state=None, n=10000, seed=0, step_limit=100000):
    return _estimate(_core.estimate_rt_variance(program, _state(state), n, seed, step_limit))
