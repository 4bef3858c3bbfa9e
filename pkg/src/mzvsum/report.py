"""Identity reports and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from mpmath import mpf

from .hpcore import (
    DEFAULT_GUARD,
    Method,
    PrecisionContext,
    SeriesValue,
    format_complex,
    format_real,
    parse_complex,
)

IDENTITY_IDS = (
    "prop1",
    "cor2",
    "prop3",
    "sum_formula",
    "gf_prop1",
    "gf_prop3",
    "cov_eq4",
    "cov_eq6",
)

CSV_COLUMNS = (
    "id",
    "params",
    "lhs",
    "rhs",
    "residual",
    "tol",
    "pass",
    "err_lhs",
    "err_rhs",
    "digits",
    "wall_time",
)

ERR_DIGITS = 6


@dataclass
class IdentityReport:
    """Outcome of one numerical identity check.

    ``passed`` holds iff ``residual <= max(tol, 10 (lhs.err + rhs.err))``.
    When a constituent failed to converge, ``lhs``/``rhs`` may be ``None``,
    ``passed`` is false and ``reason`` says why.
    """

    id: str
    params: dict
    lhs: SeriesValue | None
    rhs: SeriesValue | None
    residual: mpf | None
    tol: float
    passed: bool
    digits: int
    wall_time: float = 0.0
    reason: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_sides(cls, id, params, lhs, rhs, tol, ctx, wall_time=0.0, extra=None):
        with ctx.working():
            residual = abs(lhs.value - rhs.value)
            bound = max(mpf(tol), 10 * (lhs.err + rhs.err))
            passed = bool(residual <= bound)
        return cls(id, dict(params), lhs, rhs, residual, tol, passed, ctx.digits, wall_time, None, extra or {})

    @classmethod
    def failure(cls, id, params, reason, tol, ctx, wall_time=0.0, lhs=None, rhs=None):
        return cls(id, dict(params), lhs, rhs, None, tol, False, ctx.digits, wall_time, reason)

    @property
    def combined_err(self) -> mpf:
        return (self.lhs.err if self.lhs else mpf(0)) + (self.rhs.err if self.rhs else mpf(0))

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        args = ", ".join(f"{k}={_param_str(v, 12)}" for k, v in self.params.items())
        if self.residual is None:
            return f"{status} {self.id}({args}): {self.reason}"
        return (
            f"{status} {self.id}({args}): lhs={format_complex(self.lhs.value, 20)} "
            f"rhs={format_complex(self.rhs.value, 20)} residual={format_real(self.residual, 3)} "
            f"tol={self.tol:g}"
        )

    def to_dict(self, timings: bool = True) -> dict:
        d: dict[str, Any] = {
            "id": self.id,
            "params": {k: _param_str(v, self.digits) for k, v in self.params.items()},
            "lhs": _value_str(self.lhs, self.digits),
            "rhs": _value_str(self.rhs, self.digits),
            "residual": None if self.residual is None else format_real(self.residual, ERR_DIGITS),
            "tol": self.tol,
            "pass": self.passed,
            "err_lhs": None if self.lhs is None else format_real(self.lhs.err, ERR_DIGITS),
            "err_rhs": None if self.rhs is None else format_real(self.rhs.err, ERR_DIGITS),
            "digits": self.digits,
        }
        if timings:
            d["wall_time"] = round(self.wall_time, 6)
        if self.reason is not None:
            d["reason"] = self.reason
        if self.extra:
            d["extra"] = {k: _param_str(v, self.digits) for k, v in self.extra.items()}
        return d

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), separators=(", ", ": "))

    @classmethod
    def from_dict(cls, d: dict) -> "IdentityReport":
        digits = int(d["digits"])
        ctx = PrecisionContext(digits, DEFAULT_GUARD)
        with ctx.working():
            params = {k: _parse_param(v) for k, v in d["params"].items()}
            lhs = _parse_value(d.get("lhs"), d.get("err_lhs"))
            rhs = _parse_value(d.get("rhs"), d.get("err_rhs"))
            residual = None if d.get("residual") is None else mpf(d["residual"])
            extra = {k: _parse_param(v) for k, v in d.get("extra", {}).items()}
        return cls(
            d["id"],
            params,
            lhs,
            rhs,
            residual,
            float(d["tol"]),
            bool(d["pass"]),
            digits,
            float(d.get("wall_time", 0.0)),
            d.get("reason"),
            extra,
        )


def _param_str(v, digits):
    if isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, (tuple, list)):
        return ",".join(str(int(x)) for x in v)
    return format_complex(v, digits)


def _parse_param(v):
    if isinstance(v, (bool, int)):
        return v
    if isinstance(v, str) and "," in v:
        return tuple(int(x) for x in v.split(","))
    if isinstance(v, str):
        try:
            return parse_complex(v)
        except ValueError:
            return v
    return v


def _value_str(sv, digits):
    return None if sv is None else format_complex(sv.value, digits)


def _parse_value(value, err):
    if value is None:
        return None
    return SeriesValue(parse_complex(value), mpf(err), 0, Method.DIRECT)


def write_jsonl(reports, stream, timings: bool = False) -> None:
    for r in reports:
        stream.write(r.to_json(timings) + "\n")


def read_jsonl(stream) -> list[IdentityReport]:
    return [IdentityReport.from_dict(json.loads(line)) for line in stream if line.strip()]


def write_csv(reports, stream, timings: bool = False) -> None:
    columns = [c for c in CSV_COLUMNS if timings or c != "wall_time"]
    writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in reports:
        row = r.to_dict(timings)
        row["params"] = json.dumps(row["params"], separators=(",", ":"))
        row["pass"] = "true" if row["pass"] else "false"
        writer.writerow(row)


def reports_to_csv(reports, timings: bool = False) -> str:
    buf = io.StringIO()
    write_csv(reports, buf, timings)
    return buf.getvalue()
