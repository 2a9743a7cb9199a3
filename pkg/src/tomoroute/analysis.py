"""Speedup factors and per-transition breakdowns."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from .costmodel import CostMatrix, HeaterModel, MountModel, check_permutation, cycle_cost
from .errors import InvalidArgumentError
from .settings import SettingsSet

TOL = 1e-12


@dataclass(frozen=True)
class SpeedupReport:
    """Conventional vs optimized cycle cost, both in ``unit``."""

    baseline_cost: float
    optimized_cost: float
    speedup: float
    reduction: float
    unit: str
    baseline_seconds: float | None = None
    optimized_seconds: float | None = None
    temporal_reduction: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    def format(self) -> str:
        u = self.unit
        lines = [
            f"conventional cycle : {self.baseline_cost:.6g} {u}",
            f"optimized cycle    : {self.optimized_cost:.6g} {u}",
            f"reduction          : {self.reduction:.6g} {u}",
            f"speedup            : {self.speedup:.6g}",
        ]
        if self.temporal_reduction is not None:
            lines.append(
                f"time               : {self.baseline_seconds:.6g} s -> {self.optimized_seconds:.6g} s"
                f" (saves {self.temporal_reduction:.6g} s)"
            )
        return "\n".join(lines)


def speedup_factor(baseline: float, optimized: float) -> float:
    if optimized <= TOL:
        if baseline <= TOL:
            return 1.0
        raise InvalidArgumentError("optimized cycle has zero cost but the baseline does not")
    return baseline / optimized


def _seconds(cost: float, unit: str, conversion) -> float | None:
    if conversion is None:
        return None
    if isinstance(conversion, MountModel):
        if unit != "degrees":
            raise InvalidArgumentError("a mount model converts degree costs only")
        return conversion.to_seconds(cost)
    if isinstance(conversion, HeaterModel):
        if unit != "radians":
            raise InvalidArgumentError("a heater model converts phase (radian) costs only")
        return conversion.to_seconds(cost)
    raise InvalidArgumentError(f"unsupported conversion {conversion!r}")


def speedup(c: CostMatrix, baseline, optimized, conversion: MountModel | HeaterModel | None = None) -> SpeedupReport:
    """Compare two tours on ``c``; ``conversion`` adds the time axis."""
    b = cycle_cost(c, baseline)
    o = cycle_cost(c, optimized)
    return report_from_costs(b, o, c.unit, conversion)


def report_from_costs(b: float, o: float, unit: str, conversion=None) -> SpeedupReport:
    s = speedup_factor(b, o)
    bs = _seconds(b, unit, conversion)
    os_ = _seconds(o, unit, conversion)
    return SpeedupReport(
        baseline_cost=b,
        optimized_cost=o,
        speedup=s,
        reduction=b - o,
        unit=unit,
        baseline_seconds=bs,
        optimized_seconds=os_,
        temporal_reduction=None if bs is None else bs - os_,
    )


@dataclass(frozen=True)
class Transition:
    from_label: str
    to_label: str
    deltas: tuple[float, ...]
    cost: float


def transition_table(s: SettingsSet, c: CostMatrix, t) -> list[Transition]:
    """One row per move of the cycle, including the return to the start."""
    if len(s) != c.n:
        raise InvalidArgumentError(f"{len(s)} settings but a {c.n}-node cost matrix")
    order = check_permutation(t.order if hasattr(t, "order") else t, c.n)
    x = s.controls
    nxt = np.roll(order, -1)
    deltas = np.abs(x[nxt] - x[order])
    costs = c.entries[order, nxt]
    labels = s.labels
    return [
        Transition(labels[i], labels[j], tuple(dl.tolist()), float(w))
        for i, j, dl, w in zip(order.tolist(), nxt.tolist(), deltas, costs)
    ]


def transition_table_csv(rows: list[Transition]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    k = len(rows[0].deltas) if rows else 0
    w.writerow(["from", "to"] + [f"delta{i + 1}" for i in range(k)] + ["cost"])
    for r in rows:
        w.writerow([r.from_label, r.to_label] + [repr(v) for v in r.deltas] + [repr(r.cost)])
    return buf.getvalue()
