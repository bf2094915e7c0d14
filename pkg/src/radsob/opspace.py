"""Trace and extension operators between radial fields and interval profiles.

The trace sends a radial field to its squared-argument profile; the
extension sends an interval profile back to the radial field it generates.
On the closed-form classes the two maps are exact mutual inverses at the
term-list level, and their norm ratios against the matching weighted
interval norms stay in a bounded, refinement-stable interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .norms import (
    NormReport,
    ReportEntry,
    _ball_def_detail,
    _profile_squared_detail,
    _ratio_rows,
)
from .profile import CorpusEntry, Profile, RadialField, SquaredProfile, from_squared, to_squared


def trace(field: RadialField) -> SquaredProfile:
    """The squared-argument profile of the field: exact, term by term."""
    return to_squared(field.profile)


def extend(ft: SquaredProfile, d: int) -> RadialField:
    """The radial field in R^d generated by an interval profile (even by construction)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return RadialField(d, from_squared(ft))


@dataclass(frozen=True)
class TraceExtPair:
    """The trace/extension pair at fixed (d, k, p, r), with norm accessors."""

    d: int
    k: int
    p: float
    r: float

    def __post_init__(self):
        if self.d < 2 or self.k < 0 or self.p < 1 or self.r <= 0:
            raise ValueError("need d >= 2, k >= 0, p >= 1, r > 0")

    def forward(self, field: RadialField) -> SquaredProfile:
        return trace(field)

    def backward(self, ft: SquaredProfile) -> RadialField:
        return extend(ft, self.d)

    def field_norm(self, field: RadialField, method: str = "exact-angular",
                   seed: int = 0, samples: int = 0, tol: float = 1e-10) -> float:
        detail = _ball_def_detail(
            field, range(self.k + 1), self.p, self.r, method, seed, samples, tol
        )
        return detail.value

    def interval_norm(self, ft: SquaredProfile, tol: float = 1e-10) -> float:
        """Weighted interval norm on (0, r^2) in its p-power form."""
        return _profile_squared_detail(
            ft, self.d, self.k, self.p, self.r * self.r, "p-power", tol
        ).value


def boundedness_report(
    corpus: Sequence[CorpusEntry],
    d: int,
    k: int,
    p: float,
    r: float,
    method: str = "exact-angular",
    seed: int = 0,
    samples: int = 0,
    tol: float = 1e-10,
) -> NormReport:
    """Norm ratios of the trace and extension over a corpus.

    For each profile, records the weighted interval norm of the trace, the
    ball norm of the field, and their ratio both ways; at k = 0 the ratio
    trace-over-field equals (2 / |S^(d-1)|)^(1/p) exactly.
    """
    pair = TraceExtPair(d, k, p, r)
    report = NormReport(
        params={
            "report": "boundedness",
            "d": d,
            "k": k,
            "p": p,
            "r": r,
            "method": method,
            "tol": tol,
        }
    )
    pairs: dict[str, list[float]] = {"trace/field": [], "field/trace": []}
    for entry in corpus:
        f = entry.profile
        if f.is_zero:
            report.degenerate.append({"label": entry.label, "reason": "zero profile"})
            continue
        field = RadialField(d, f)
        ft = pair.forward(field)
        if pair.backward(ft) != field:
            raise AssertionError(f"trace/extend round trip failed for {entry.label}")
        v_field = _ball_def_detail(
            field, range(k + 1), p, r, method, seed, samples, tol
        )
        v_trace = _profile_squared_detail(ft, d, k, p, r * r, "p-power", tol)
        report.entries.append(
            ReportEntry(entry.label, "field", v_field.value, v_field.err, method)
        )
        report.entries.append(
            ReportEntry(entry.label, "trace", v_trace.value, v_trace.err, "exact-angular")
        )
        if v_field.value > 0 and v_trace.value > 0:
            pairs["trace/field"].append(v_trace.value / v_field.value)
            pairs["field/trace"].append(v_field.value / v_trace.value)
        else:
            report.degenerate.append({"label": entry.label, "reason": "zero norm"})
    report.ratios = _ratio_rows(pairs)
    return report
