"""Transition-cost matrices between measurement settings."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, SizeLimitError
from .settings import DEGREES, RADIANS, SettingsSet

COST_UNITS = ("degrees", "radians", "seconds", "joules", "unitless")

TWO_PI = 2.0 * math.pi

# dense float64 storage; 12000 nodes is about 1.2 GB
MAX_MATRIX_NODES = 12_000


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Square transition-cost matrix with zero diagonal.

    ``entries[i, j]`` is the cost of switching from setting ``i`` to
    setting ``j``.  The array is made read-only on construction.
    """

    entries: np.ndarray
    symmetric: bool
    unit: str = "unitless"

    def __post_init__(self):
        e = self.entries
        if not (isinstance(e, np.ndarray) and e.dtype == np.float64 and not e.flags.writeable):
            e = np.array(e, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise InvalidArgumentError(f"cost matrix must be square, got shape {e.shape}")
        if e.shape[0] == 0:
            raise InvalidArgumentError("cost matrix cannot be empty")
        if self.unit not in COST_UNITS:
            raise InvalidArgumentError(f"unknown cost unit {self.unit!r}")
        if not np.all(np.isfinite(e)):
            raise InvalidArgumentError("cost matrix entries must be finite")
        if np.any(np.diagonal(e) != 0):
            raise InvalidArgumentError("cost matrix diagonal must be zero")
        if np.any(e < 0):
            raise InvalidArgumentError("cost matrix entries must be non-negative")
        if self.symmetric and not np.array_equal(e, e.T):
            raise InvalidArgumentError("matrix flagged symmetric but entries differ from transpose")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_array(cls, entries, unit: str = "unitless") -> "CostMatrix":
        """Build from an array, detecting symmetry exactly."""
        e = np.array(entries, dtype=np.float64)
        return cls(e, bool(np.array_equal(e, e.T)), unit)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, idx):
        return self.entries[idx]

    def scaled(self, factor: float, unit: str | None = None) -> "CostMatrix":
        if not factor > 0:
            raise InvalidArgumentError("scale factor must be positive")
        return CostMatrix(self.entries * factor, self.symmetric, unit or self.unit)

    def to_dict(self) -> dict:
        return {"n": self.n, "symmetric": self.symmetric, "unit": self.unit, "rows": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "CostMatrix":
        try:
            m = cls(np.array(data["rows"], dtype=np.float64), bool(data["symmetric"]), data["unit"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed cost matrix document: {exc}") from None
        if m.n != int(data.get("n", m.n)):
            raise InvalidArgumentError("'n' does not match the number of rows")
        return m

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CostMatrix":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MountModel:
    """Motorized rotation mount moving at a constant angular speed (deg/s)."""

    speed: float = 10.0

    def __post_init__(self):
        if not (self.speed > 0 and math.isfinite(self.speed)):
            raise InvalidArgumentError("mount speed must be positive")

    def to_seconds(self, angle_deg: float) -> float:
        return to_temporal(angle_deg, self)


@dataclass(frozen=True)
class HeaterModel:
    """Resistive phase shifter: power and settling time for a 2*pi change."""

    power_per_2pi: float = 0.5
    settle_time_per_2pi: float = 1.0

    def __post_init__(self):
        for name in ("power_per_2pi", "settle_time_per_2pi"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise InvalidArgumentError(f"{name} must be positive")

    def to_seconds(self, phase_rad: float) -> float:
        if phase_rad < 0:
            raise InvalidArgumentError("phase change must be non-negative")
        return self.settle_time_per_2pi * phase_rad / TWO_PI

    def steady_power(self, phases: np.ndarray) -> np.ndarray:
        """Total heater power holding each row of ``phases`` (wrapped to [0, 2*pi))."""
        wrapped = np.mod(phases, TWO_PI)
        return self.power_per_2pi * wrapped.sum(axis=-1) / TWO_PI


def chebyshev_matrix(x: np.ndarray) -> np.ndarray:
    """max_k |x[i, k] - x[j, k]| for all pairs, one actuator at a time."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n > MAX_MATRIX_NODES:
        raise SizeLimitError(f"{n} settings exceed the dense matrix limit of {MAX_MATRIX_NODES} nodes")
    out = np.zeros((n, n))
    tmp = np.empty((n, n))
    for k in range(x.shape[1]):
        col = x[:, k]
        np.subtract.outer(col, col, out=tmp)
        np.abs(tmp, out=tmp)
        np.maximum(out, tmp, out=out)
    return out


def max_angle_matrix(s: SettingsSet) -> CostMatrix:
    """Largest single-actuator travel between every pair of settings.

    Angles are differenced plainly, without wrapping modulo the plate
    period.  The same matrix in radians is the time-optimal model for
    heater phase shifters.
    """
    if s.unit not in (DEGREES, RADIANS):
        raise InvalidArgumentError(f"unsupported settings unit {s.unit!r}")
    return CostMatrix(chebyshev_matrix(s.controls), True, s.unit)


HEAT_POWER_MODES = ("destination", "source", "mean", "max")


def heat_matrix(s: SettingsSet, m: HeaterModel | None = None, power: str = "destination") -> CostMatrix:
    """Heat dumped into the chip by each transition, in joules.

    The transition lasts as long as the largest phase change takes to
    settle; during that time the heaters dissipate the total steady power
    of the ``power`` end of the transition ("destination" by default;
    "source", "mean" and "max" of the two are alternatives).
    """
    if s.unit != RADIANS:
        raise InvalidArgumentError("heat model needs phase settings in radians")
    if power not in HEAT_POWER_MODES:
        raise InvalidArgumentError(f"power must be one of {HEAT_POWER_MODES}")
    m = m or HeaterModel()
    x = s.controls
    settle = m.settle_time_per_2pi * chebyshev_matrix(x) / TWO_PI
    p = m.steady_power(x)
    if power == "destination":
        watts = p[None, :]
    elif power == "source":
        watts = p[:, None]
    elif power == "mean":
        watts = 0.5 * (p[:, None] + p[None, :])
    else:
        watts = np.maximum(p[:, None], p[None, :])
    entries = watts * settle
    np.fill_diagonal(entries, 0.0)
    return CostMatrix(entries, bool(np.array_equal(entries, entries.T)), "joules")


def _order(t) -> Sequence[int]:
    return t.order if hasattr(t, "order") else t


def check_permutation(order, n: int) -> np.ndarray:
    arr = np.asarray(order)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidArgumentError(f"tour has {arr.shape[0] if arr.ndim == 1 else arr.shape} entries, expected {n}")
    if n and not np.issubdtype(arr.dtype, np.integer):
        raise InvalidArgumentError("tour entries must be integers")
    arr = arr.astype(np.int64)
    seen = np.zeros(n, dtype=bool)
    if n and (arr.min() < 0 or arr.max() >= n):
        raise InvalidArgumentError("tour index out of range")
    seen[arr] = True
    if not seen.all():
        raise InvalidArgumentError("tour is not a permutation")
    return arr


def cycle_cost(c: CostMatrix, t) -> float:
    """Total cost of visiting ``t`` in order and returning to its start."""
    arr = check_permutation(_order(t), c.n)
    return float(c.entries[arr, np.roll(arr, -1)].sum())


def to_temporal(angular_cost: float, m: MountModel | None = None) -> float:
    """Convert wave plate travel in degrees to seconds for mount ``m``."""
    m = m or MountModel()
    if angular_cost < 0:
        raise InvalidArgumentError("angular cost must be non-negative")
    return angular_cost / m.speed
