from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..costmodel import check_permutation
from ..errors import InvalidArgumentError

METHODS = ("brute_force", "held_karp", "heuristic", "nested", "given")


@dataclass(frozen=True)
class Tour:
    """A cyclic visiting order of setting indices."""

    order: tuple[int, ...]

    def __post_init__(self):
        arr = check_permutation(np.asarray(self.order, dtype=np.int64), len(self.order))
        object.__setattr__(self, "order", tuple(arr.tolist()))

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    @classmethod
    def identity(cls, n: int) -> "Tour":
        return cls(tuple(range(n)))

    def canonical(self, symmetric: bool = False) -> "Tour":
        """Rotation starting at index 0; for symmetric costs also the smaller direction."""
        o = self.order
        k = o.index(0)
        rot = o[k:] + o[:k]
        if symmetric and len(rot) > 2:
            rev = (rot[0],) + rot[:0:-1]
            rot = min(rot, rev)
        return Tour(rot)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.order, dtype=np.int64)


@dataclass(frozen=True)
class Budget:
    """Limits for the heuristic.

    ``max_restarts`` constructions are each improved by ``perturbations``
    kicks (``None`` picks a size-dependent default).  ``max_seconds`` caps
    wall time; results are reproducible only when it is ``None`` or never
    reached.
    """

    max_seconds: float | None = None
    max_restarts: int = 4
    perturbations: int | None = None

    def __post_init__(self):
        if self.max_restarts < 1:
            raise InvalidArgumentError("max_restarts must be at least 1")
        if self.max_seconds is not None and not self.max_seconds > 0:
            raise InvalidArgumentError("max_seconds must be positive")
        if self.perturbations is not None and self.perturbations < 0:
            raise InvalidArgumentError("perturbations must be non-negative")


@dataclass(frozen=True)
class SolveResult:
    tour: Tour
    cost: float
    method: str
    optimal: bool
    seed: int | None = None
    elapsed: float = field(default=0.0, compare=False)
    iterations: int = 0

    def to_dict(self) -> dict:
        # elapsed is left out so that files are byte-stable across runs
        return {
            "order": list(self.tour.order),
            "cost": self.cost,
            "method": self.method,
            "optimal": self.optimal,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SolveResult":
        try:
            return cls(
                Tour(tuple(int(i) for i in data["order"])),
                float(data.get("cost", float("nan"))),
                data.get("method", "given"),
                bool(data.get("optimal", False)),
                data.get("seed"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed tour document: {exc}") from None


def nest_tours(inner: Tour | Sequence[int], outer_sequence: Sequence[int], inner_size: int | None = None) -> Tour:
    """Visit the ``inner`` order once for every outer index in turn.

    Index ``a * |B| + b`` addresses setting ``(a, b)`` of a product grid
    whose outer factor varies slowest, as built by ``product_settings``
    and the multi-qubit generators.
    """
    inner_order = inner.order if isinstance(inner, Tour) else tuple(int(i) for i in inner)
    nb = len(inner_order) if inner_size is None else inner_size
    if nb != len(inner_order):
        raise InvalidArgumentError(f"inner tour has {len(inner_order)} entries, expected {nb}")
    check_permutation(np.asarray(inner_order, dtype=np.int64), nb)
    outer = np.asarray(list(outer_sequence), dtype=np.int64)
    check_permutation(outer, len(outer))
    order = (outer[:, None] * nb + np.asarray(inner_order, dtype=np.int64)[None, :]).ravel()
    return Tour(tuple(order.tolist()))
