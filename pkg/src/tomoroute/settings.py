"""Measurement/preparation setting grids.

Every generator returns a :class:`SettingsSet` whose index order is the
conventional measurement order: the lexicographic product of the
single-qubit blocks with the last qubit varying fastest.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, SizeLimitError

DEGREES = "degrees"
RADIANS = "radians"
UNITS = (DEGREES, RADIANS)

MAX_SETTINGS = 1_000_000

SCHEMES = ("six_state", "three_base", "path_encoded", "random", "custom", "product")

# (label, HWP angle, QWP angle) in degrees
SIX_STATE_BLOCK = (
    ("H", 0.0, 0.0),
    ("V", 45.0, 0.0),
    ("D", 22.5, 0.0),
    ("A", -22.5, 0.0),
    ("R", 0.0, 45.0),
    ("L", 0.0, -45.0),
)

# bases measured with two detectors share the H, D, R orientations
THREE_BASE_BLOCK = (
    ("Z", 0.0, 0.0),
    ("X", 22.5, 0.0),
    ("Y", 0.0, 45.0),
)

# (label, theta, phi) in radians; no label is a prefix-ambiguous
# concatenation of others, so multi-qubit labels stay unique
PATH_BLOCK = (
    ("0", 0.0, 0.0),
    ("1", math.pi, 0.0),
    ("+", math.pi / 2, 0.0),
    ("-", -math.pi / 2, 0.0),
    ("+i", math.pi / 2, math.pi / 2),
    ("-i", math.pi / 2, -math.pi / 2),
)


@dataclass(frozen=True)
class MeasurementSetting:
    """One projector or preparation: a label plus one value per actuator."""

    label: str
    controls: tuple[float, ...]

    def __post_init__(self):
        controls = tuple(float(v) for v in self.controls)
        if not all(math.isfinite(v) for v in controls):
            raise InvalidArgumentError(f"non-finite control value in setting {self.label!r}")
        object.__setattr__(self, "controls", controls)


@dataclass(frozen=True)
class SettingsSet:
    """Ordered settings; index order is the conventional sequence."""

    scheme: str
    n_qubits: int
    settings: tuple[MeasurementSetting, ...]
    unit: str = DEGREES
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"unknown scheme {self.scheme!r}")
        if self.unit not in UNITS:
            raise InvalidArgumentError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be positive")
        settings = tuple(self.settings)
        object.__setattr__(self, "settings", settings)
        if not settings:
            raise InvalidArgumentError("a settings set cannot be empty")
        widths = {len(s.controls) for s in settings}
        if len(widths) != 1:
            raise InvalidArgumentError("all settings must have the same number of controls")
        labels = [s.label for s in settings]
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError("setting labels must be unique")

    def __len__(self):
        return len(self.settings)

    def __iter__(self):
        return iter(self.settings)

    def __getitem__(self, i):
        return self.settings[i]

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.settings]

    @property
    def n_controls(self) -> int:
        return len(self.settings[0].controls)

    @cached_property
    def controls(self) -> np.ndarray:
        """Read-only (len, n_controls) float array of all control values."""
        arr = np.array([s.controls for s in self.settings], dtype=np.float64)
        arr.flags.writeable = False
        return arr

    def index(self, label: str) -> int:
        return self._label_index[label]

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {s.label: i for i, s in enumerate(self.settings)}

    def indices(self, labels: Iterable[str]) -> list[int]:
        """Map labels to indices, e.g. to turn a list of labels into a tour."""
        try:
            return [self._label_index[lab] for lab in labels]
        except KeyError as exc:
            raise InvalidArgumentError(f"unknown setting label {exc.args[0]!r}") from None

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n_qubits": self.n_qubits,
            "unit": self.unit,
            "settings": [{"label": s.label, "controls": list(s.controls)} for s in self.settings],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SettingsSet":
        try:
            settings = [MeasurementSetting(d["label"], tuple(d["controls"])) for d in data["settings"]]
            return cls(data["scheme"], int(data["n_qubits"]), tuple(settings), data["unit"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed settings document: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SettingsSet":
        return cls.from_dict(json.loads(text))


def _check_n(n, per_qubit=6):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgumentError(f"number of qubits must be a positive integer, got {n!r}")
    _check_count(per_qubit ** int(n))
    return int(n)


def _check_count(count):
    if count > MAX_SETTINGS:
        raise SizeLimitError(f"{count} settings exceed the limit of {MAX_SETTINGS}")


def _tensor_grid(block, n, fastest="last"):
    """Cartesian power of a single-qubit block as label/control tuples."""
    if fastest not in ("last", "first"):
        raise InvalidArgumentError("fastest must be 'last' or 'first'")
    out = []
    for combo in itertools.product(block, repeat=n):
        if fastest == "first":
            combo = combo[::-1]
        label = "".join(c[0] for c in combo)
        controls = tuple(v for c in combo for v in c[1:])
        out.append(MeasurementSetting(label, controls))
    return tuple(out)


def six_state_settings(n: int, *, fastest: str = "last") -> SettingsSet:
    """H, V, D, A, R, L projections on each of ``n`` qubits.

    Each qubit contributes a (HWP, QWP) angle pair in degrees.  With
    ``fastest="first"`` the first qubit is cycled fastest instead, which
    only permutes the conventional order.
    """
    n = _check_n(n)
    return SettingsSet("six_state", n, _tensor_grid(SIX_STATE_BLOCK, n, fastest), DEGREES)


def three_base_settings(n: int, *, fastest: str = "last") -> SettingsSet:
    """Z, X, Y basis settings for two-detector analyzers (3**n settings)."""
    n = _check_n(n, 3)
    return SettingsSet("three_base", n, _tensor_grid(THREE_BASE_BLOCK, n, fastest), DEGREES)


def path_encoded_settings(n: int, *, fastest: str = "last") -> SettingsSet:
    """Heater phases (theta, phi) in radians for on-chip path qubits."""
    n = _check_n(n)
    return SettingsSet("path_encoded", n, _tensor_grid(PATH_BLOCK, n, fastest), RADIANS)


def random_settings(
    n: int,
    p: int = 6,
    seed: int = 0,
    angle_range: tuple[float, float] = (0.0, 180.0),
) -> SettingsSet:
    """``p**n`` polarization settings with uniformly random wave plate angles.

    Every HWP and QWP angle of every setting is an independent draw from
    ``[lo, hi)`` in degrees.  The generator is created from ``seed`` on each
    call, so equal arguments give bit-identical sets.
    """
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 2:
        raise InvalidArgumentError(f"p must be an integer >= 2, got {p!r}")
    n = _check_n(n, int(p))
    lo, hi = (float(v) for v in angle_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise InvalidArgumentError(f"angle range must be a non-empty interval, got {angle_range!r}")
    count = int(p) ** n
    rng = np.random.default_rng(seed)
    angles = rng.uniform(lo, hi, size=(count, 2 * n))
    # uniform() may round up to hi for tiny intervals
    angles = np.where(angles >= hi, np.nextafter(hi, lo), angles)
    width = len(str(count - 1))
    settings = tuple(
        MeasurementSetting(f"m{i:0{width}d}", tuple(row)) for i, row in enumerate(angles.tolist())
    )
    return SettingsSet(
        "random", n, settings, DEGREES, meta={"p": int(p), "seed": seed, "angle_range": (lo, hi)}
    )


def product_settings(a: SettingsSet, b: SettingsSet) -> SettingsSet:
    """Combine a preparation grid ``a`` with an analysis grid ``b``.

    ``a`` is the slow (outer) index and ``b`` the fast one; controls are
    concatenated and labels joined with ``⊗``.
    """
    if a.unit != b.unit:
        raise InvalidArgumentError(f"unit mismatch: {a.unit} vs {b.unit}")
    _check_count(len(a) * len(b))
    settings = tuple(
        MeasurementSetting(f"{sa.label}⊗{sb.label}", sa.controls + sb.controls)
        for sa in a.settings
        for sb in b.settings
    )
    return SettingsSet("product", a.n_qubits + b.n_qubits, settings, a.unit)


def custom_settings(
    rows: Sequence[tuple[str, Sequence[float]]], unit: str = DEGREES, n_qubits: int = 1
) -> SettingsSet:
    settings = tuple(MeasurementSetting(label, tuple(vals)) for label, vals in rows)
    return SettingsSet("custom", n_qubits, settings, unit)


def read_settings_csv(path, unit: str = DEGREES, n_qubits: int | None = None) -> SettingsSet:
    """Load a control table with header ``label,c1,...,ck``.

    The unit is not stored in the file.  ``n_qubits`` defaults to ``k // 2``
    (two actuators per qubit), at least 1.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty CSV file") from None
        if not header or header[0].strip().lower() != "label" or len(header) < 2:
            raise InvalidArgumentError(f"{path}: header must be 'label,c1,...,ck'")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not f.strip() for f in rec):
                continue
            if len(rec) != len(header):
                raise InvalidArgumentError(f"{path}:{lineno}: expected {len(header)} fields, got {len(rec)}")
            try:
                rows.append((rec[0].strip(), [float(v) for v in rec[1:]]))
            except ValueError:
                raise InvalidArgumentError(f"{path}:{lineno}: non-numeric control value") from None
    if n_qubits is None:
        n_qubits = max(1, (len(header) - 1) // 2)
    return custom_settings(rows, unit=unit, n_qubits=n_qubits)


def write_settings_csv(s: SettingsSet, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label"] + [f"c{k + 1}" for k in range(s.n_controls)])
        for st in s.settings:
            w.writerow([st.label] + [repr(v) for v in st.controls])
