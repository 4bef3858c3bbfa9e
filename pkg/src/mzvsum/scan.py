"""Grid scans: JSON configuration, task expansion and (parallel) execution.

A configuration is a JSON object::

    {
      "digits": 30,                 # optional, >= 20
      "tol": 1e-10,                 # optional, > 0
      "cutoffs": {"start": 250, "stop": 4000, "count": 64},   # optional
      "target_tol": 1e-12,          # optional
      "output": "reports.jsonl",    # optional
      "format": "jsonl",            # or "csv"
      "checks": [
        {"id": "prop1", "n": [1, 2], "m": {"min": 1, "max": 3},
         "alpha": ["1", "0.75+0.25i"], "beta": ["0.5"]},
        {"id": "sum_formula", "k": {"min": 2, "max": 7}, "digits": 40, "tol": 1e-12}
      ]
    }

Each entry of ``checks`` is expanded into the Cartesian product of its
parameter lists.  Integer parameters take a list or an inclusive
``{"min", "max"}`` range; complex parameters take decimal strings.  For the
weight/depth identities an omitted ``n`` means every ``0 < n < k``, and
combinations with ``n >= k`` are skipped.  ``digits`` and ``tol`` may be set
per entry; otherwise the top-level values apply, then the identity default.
"""
from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

from mpmath import mp

from .errors import DomainError
from .extrapolate import TruncationPlan, geometric_cutoffs
from .hpcore import PrecisionContext, parse_complex
from .identities import (
    DEFAULT_TOL,
    SUM_FORMULA_TOL,
    check_cor2,
    check_gf_prop1,
    check_gf_prop3,
    check_prop1,
    check_prop3,
    check_sum_formula,
)
from .quadrature import QUAD_TOL, check_change_of_variables
from .report import IDENTITY_IDS, IdentityReport

INT_PARAMS = ("k", "n", "m", "level")
COMPLEX_PARAMS = ("alpha", "beta", "X")
POSITIVE_PARAMS = ("alpha", "beta")

# parameter names per identity, in the order they appear in reports
SIGNATURES = {
    "prop1": ("n", "m", "alpha", "beta"),
    "cor2": ("k", "n", "alpha"),
    "prop3": ("k", "n", "alpha"),
    "sum_formula": ("k", "n"),
    "gf_prop1": ("n", "alpha", "beta", "X"),
    "gf_prop3": ("n", "alpha", "X"),
    "cov_eq4": ("n", "alpha", "beta", "X", "level"),
    "cov_eq6": ("n", "alpha", "X", "level"),
}
OPTIONAL = {"X": "0", "level": 7}
DEFAULT_TOLS = {"sum_formula": SUM_FORMULA_TOL, "cov_eq4": QUAD_TOL, "cov_eq6": QUAD_TOL}
FORMATS = ("jsonl", "csv")


class ConfigError(DomainError):
    """Invalid scan configuration; the message names the offending field."""


@dataclass(frozen=True)
class Task:
    id: str
    params: tuple  # ((name, int | decimal string), ...) in signature order
    digits: int
    tol: float
    plan: TruncationPlan | None = None

    def sort_key(self):
        key = []
        with mp.workdps(60):
            for name, v in self.params:
                if name in COMPLEX_PARAMS:
                    z = parse_complex(v)
                    key.append((z.real, z.imag, v))
                else:
                    key.append((v, 0, ""))
        return (IDENTITY_IDS.index(self.id), tuple(key), self.digits, self.tol)


@dataclass(frozen=True)
class ScanConfig:
    tasks: tuple
    output: str | None
    format: str


def _field_error(path, msg):
    return ConfigError(f"{path}: {msg}")


def _int_values(raw, path) -> list[int]:
    if isinstance(raw, dict):
        if set(raw) != {"min", "max"}:
            raise _field_error(path, "an integer range needs exactly the keys 'min' and 'max'")
        lo, hi = raw["min"], raw["max"]
        for name, v in (("min", lo), ("max", hi)):
            if isinstance(v, bool) or not isinstance(v, int):
                raise _field_error(f"{path}.{name}", f"expected an integer, got {v!r}")
        return list(range(lo, hi + 1))
    values = raw if isinstance(raw, list) else [raw]
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int):
            raise _field_error(f"{path}[{i}]", f"expected an integer, got {v!r}")
    return list(values)


def _complex_values(raw, path, positive) -> list[str]:
    values = raw if isinstance(raw, list) else [raw]
    out = []
    for i, v in enumerate(values):
        where = f"{path}[{i}]"
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise _field_error(where, f"expected a decimal string such as \"0.75+0.25i\", got {v!r}")
        text = str(v)
        try:
            with mp.workdps(60):
                z = parse_complex(text)
        except DomainError as exc:
            raise _field_error(where, str(exc)) from None
        if positive and not z.real > 0:
            raise _field_error(where, f"needs a positive real part, got {text}")
        out.append(text)
    return out


def _digits(raw, path) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 20:
        raise _field_error(path, f"digits must be an integer >= 20, got {raw!r}")
    return raw


def _tol(raw, path) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not raw > 0:
        raise _field_error(path, f"tolerance must be a positive number, got {raw!r}")
    return float(raw)


def _plan(cfg) -> TruncationPlan | None:
    cut = cfg.get("cutoffs")
    target = cfg.get("target_tol")
    if cut is None and target is None:
        return None
    kwargs: dict[str, Any] = {}
    if target is not None:
        kwargs["target_tol"] = _tol(target, "target_tol")
    if cut is not None:
        try:
            if isinstance(cut, dict):
                cutoffs = geometric_cutoffs(int(cut["start"]), int(cut["stop"]), int(cut.get("count", 64)))
            else:
                cutoffs = tuple(int(c) for c in cut)
            return TruncationPlan(cutoffs, **kwargs)
        except (KeyError, TypeError, ValueError) as exc:
            raise _field_error("cutoffs", f"invalid cutoff schedule ({exc})") from None
    return TruncationPlan(**kwargs)


def _expand(entry, index, digits, tol, plan) -> list[Task]:
    path = f"checks[{index}]"
    if not isinstance(entry, dict):
        raise _field_error(path, "each check must be a JSON object")
    ident = str(entry.get("id", "")).replace("-", "_")
    if ident not in SIGNATURES:
        raise _field_error(f"{path}.id", f"unknown identity {entry.get('id')!r}; expected one of {', '.join(SIGNATURES)}")
    names = SIGNATURES[ident]
    allowed = set(names) | {"id", "digits", "tol"}
    for key in entry:
        if key not in allowed:
            raise _field_error(f"{path}.{key}", f"not a parameter of {ident}")
    digits = _digits(entry["digits"], f"{path}.digits") if "digits" in entry else digits
    if "tol" in entry:
        tol = _tol(entry["tol"], f"{path}.tol")
    elif tol is None:
        tol = DEFAULT_TOLS.get(ident, DEFAULT_TOL)

    weight_depth = "k" in names
    grids = []
    for name in names:
        where = f"{path}.{name}"
        if name not in entry:
            if name in OPTIONAL:
                grids.append([OPTIONAL[name]])
                continue
            if name == "n" and weight_depth:
                grids.append(None)  # every 0 < n < k
                continue
            raise _field_error(where, f"missing parameter for {ident}")
        if name in INT_PARAMS:
            values = _int_values(entry[name], where)
            for i, v in enumerate(values):
                if v < 1 or (name == "level" and v < 2):
                    raise _field_error(f"{where}[{i}]", f"must be a positive integer, got {v}")
            grids.append(values)
        else:
            grids.append(_complex_values(entry[name], where, name in POSITIVE_PARAMS))

    if weight_depth:
        n_pos = names.index("n")
        k_pos = names.index("k")
        combos = []
        n_grid = grids[n_pos]
        for k in grids[k_pos]:
            ns = range(1, k) if n_grid is None else [n for n in n_grid if n < k]
            sub = list(grids)
            sub[k_pos] = [k]
            sub[n_pos] = list(ns)
            combos.extend(itertools.product(*sub))
    else:
        combos = list(itertools.product(*grids))
    tasks = [Task(ident, tuple(zip(names, c)), digits, tol, plan) for c in combos]
    for t in tasks:
        _check_radius(t, path)
    return tasks


# |X| must stay inside a quarter of the real part of this parameter
_RADIUS_PARAM = {"gf_prop1": "beta", "gf_prop3": "alpha", "cov_eq4": "beta", "cov_eq6": "alpha"}


def _check_radius(task: Task, path: str) -> None:
    ref = _RADIUS_PARAM.get(task.id)
    if ref is None:
        return
    p = dict(task.params)
    with mp.workdps(60):
        x = parse_complex(p["X"])
        bound = parse_complex(p[ref]).real / 4
        if not abs(x) < bound:
            raise _field_error(
                f"{path}.X", f"X={p['X']} violates |X| < Re {ref}/4 at {ref}={p[ref]}"
            )


def load_config(data: dict, default_digits: int | None = None) -> ScanConfig:
    """Validate a parsed configuration and expand it into sorted tasks.

    Raises
    ------
    ConfigError
        With the offending field named, e.g. ``checks[0].alpha[2]``.
    """
    if not isinstance(data, dict):
        raise ConfigError("config: the top level must be a JSON object")
    known = {"digits", "tol", "cutoffs", "target_tol", "output", "format", "checks"}
    for key in data:
        if key not in known:
            raise _field_error(key, "unknown configuration key")
    if "digits" in data:
        digits = _digits(data["digits"], "digits")
    else:
        digits = PrecisionContext.from_env(default_digits).digits
    tol = _tol(data["tol"], "tol") if "tol" in data else None
    fmt = data.get("format", "jsonl")
    if fmt not in FORMATS:
        raise _field_error("format", f"expected one of {', '.join(FORMATS)}, got {fmt!r}")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise _field_error("output", f"expected a path string, got {output!r}")
    checks = data.get("checks", [])
    if not isinstance(checks, list):
        raise _field_error("checks", "expected a list of check objects")
    plan = _plan(data)
    tasks = set()
    for i, entry in enumerate(checks):
        tasks.update(_expand(entry, i, digits, tol, plan))
    return ScanConfig(tuple(sorted(tasks, key=Task.sort_key)), output, fmt)


def read_config(path: str, default_digits: int | None = None) -> ScanConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path!r} ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path!r} is not valid JSON ({exc})") from None
    return load_config(data, default_digits)


def run_task(task: Task) -> IdentityReport:
    """Run one grid point in the current process."""
    ctx = PrecisionContext(task.digits)
    p = dict(task.params)
    plan = task.plan
    if task.id == "prop1":
        return check_prop1(p["n"], p["m"], p["alpha"], p["beta"], task.tol, ctx, plan)
    if task.id == "cor2":
        return check_cor2(p["k"], p["n"], p["alpha"], task.tol, ctx, plan)
    if task.id == "prop3":
        return check_prop3(p["k"], p["n"], p["alpha"], task.tol, ctx, plan)
    if task.id == "sum_formula":
        return check_sum_formula(p["k"], p["n"], task.tol, ctx, plan)
    if task.id == "gf_prop1":
        return check_gf_prop1(p["n"], p["alpha"], p["beta"], p["X"], task.tol, ctx, plan)
    if task.id == "gf_prop3":
        return check_gf_prop3(p["n"], p["alpha"], p["X"], task.tol, ctx, plan)
    if task.id == "cov_eq4":
        return check_change_of_variables("eq4", p["n"], p["alpha"], p["beta"], p["X"], p["level"], ctx, task.tol)
    if task.id == "cov_eq6":
        return check_change_of_variables("eq6", p["n"], p["alpha"], None, p["X"], p["level"], ctx, task.tol)
    raise ConfigError(f"unknown identity {task.id!r}")


def run_tasks(tasks, jobs: int = 1) -> list[IdentityReport]:
    """Run tasks and return their reports in task order, whatever the completion order."""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_task, tasks))
