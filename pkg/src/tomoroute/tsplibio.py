"""TSPLIB problem and tour files with explicit integer weights.

Costs are written as ``round(scale * cost)``; the scale and unit are kept
in a ``COMMENT : SCALE=<k> UNIT=<unit>`` line so that importing divides
them back out.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .costmodel import COST_UNITS, CostMatrix
from .errors import InvalidArgumentError, PrecisionError, TsplibParseError, UnsupportedFormatError

INTEGRALITY_TOL = 1e-6
DEFAULT_ROUNDED_SCALE = 10**6

_SUPPORTED_FORMATS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_ROW", "UPPER_DIAG_ROW", "LOWER_DIAG_ROW")
_SCALE_RE = re.compile(r"\bSCALE=(\d+)\b")
_UNIT_RE = re.compile(r"\bUNIT=(\w+)\b")


def default_scale(c: CostMatrix) -> tuple[int, bool]:
    """(scale, lossy) appropriate for ``c``.

    Degree matrices built from this package's settings are multiples of
    0.5, so twice the value is exact; other units get 10**6 with rounding.
    """
    if c.unit == "degrees":
        return 2, False
    return DEFAULT_ROUNDED_SCALE, True


def export_tsplib(c: CostMatrix, name: str = "tomography", scale: int | None = None, *, lossy: bool | None = None) -> str:
    """Render ``c`` as an EXPLICIT FULL_MATRIX instance.

    With an explicit ``scale`` the scaled weights must be integral within
    1e-6 unless ``lossy`` is true.  Symmetric matrices become TYPE TSP,
    others ATSP.
    """
    if scale is None:
        scale, auto_lossy = default_scale(c)
        lossy = auto_lossy if lossy is None else lossy
    if isinstance(scale, bool) or int(scale) != scale or scale < 1:
        raise InvalidArgumentError(f"scale must be a positive integer, got {scale!r}")
    scale = int(scale)
    if not re.fullmatch(r"[\x21-\x7e]+", name):
        raise InvalidArgumentError("instance name must be non-empty printable ASCII without spaces")
    scaled = c.entries * scale
    weights = np.rint(scaled)
    err = float(np.max(np.abs(scaled - weights)))
    if err > INTEGRALITY_TOL and not lossy:
        raise PrecisionError(
            f"scale {scale} leaves weights {err:.3g} away from integers; use a larger scale or allow rounding"
        )
    typ = "TSP" if c.symmetric else "ATSP"
    comment = f"SCALE={scale} UNIT={c.unit}" + (" ROUNDED" if err > INTEGRALITY_TOL else "")
    lines = [
        f"NAME : {name}",
        f"TYPE : {typ}",
        f"COMMENT : {comment}",
        f"DIMENSION : {c.n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    w = weights.astype(np.int64)
    lines.extend(" ".join(map(str, row)) for row in w.tolist())
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _parse_header(text: str):
    header = {}
    comments = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        head = line.rstrip(":").strip()
        if head.endswith("_SECTION") or head == "EOF":
            return header, comments, lines, lineno, head
        if ":" not in line:
            raise TsplibParseError(f"expected 'KEY : value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.upper()
        if key == "COMMENT":
            comments.append(value)
        else:
            header[key] = value
    return header, comments, lines, len(lines) + 1, None


def _tokens(lines, start):
    """(value, line number) pairs until EOF or the next section keyword."""
    for idx in range(start, len(lines)):
        line = lines[idx].strip()
        if not line:
            continue
        if line == "EOF" or line.endswith("_SECTION") or re.match(r"^[A-Z_]+\s*:", line):
            return
        for tok in line.split():
            yield tok, idx + 1


def import_tsplib(text: str) -> CostMatrix:
    """Parse an EXPLICIT instance into a :class:`CostMatrix`.

    Diagonal entries (often a large sentinel in TSPLIB files) are set to
    zero.  A ``SCALE=`` tag in a COMMENT line is divided out.
    """
    header, comments, lines, lineno, section = _parse_header(text)
    typ = header.get("TYPE", "").split()[0].upper() if header.get("TYPE") else ""
    if typ not in ("TSP", "ATSP"):
        raise UnsupportedFormatError(f"unsupported TYPE {header.get('TYPE')!r}")
    ewt = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if ewt != "EXPLICIT":
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_TYPE {ewt or None!r}; only EXPLICIT is handled")
    fmt = header.get("EDGE_WEIGHT_FORMAT", "").upper()
    if fmt not in _SUPPORTED_FORMATS:
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT {fmt or None!r}")
    if typ == "ATSP" and fmt != "FULL_MATRIX":
        raise UnsupportedFormatError("ATSP instances must use FULL_MATRIX")
    try:
        n = int(header["DIMENSION"])
    except (KeyError, ValueError):
        raise TsplibParseError("missing or invalid DIMENSION") from None
    if n < 1:
        raise TsplibParseError("DIMENSION must be positive")
    if section != "EDGE_WEIGHT_SECTION":
        raise TsplibParseError("missing EDGE_WEIGHT_SECTION", lineno)

    expected = {
        "FULL_MATRIX": n * n,
        "UPPER_ROW": n * (n - 1) // 2,
        "LOWER_ROW": n * (n - 1) // 2,
        "UPPER_DIAG_ROW": n * (n + 1) // 2,
        "LOWER_DIAG_ROW": n * (n + 1) // 2,
    }[fmt]
    values = []
    last_line = lineno
    for tok, ln in _tokens(lines, lineno):
        if len(values) == expected:
            raise TsplibParseError(f"more than {expected} weights for DIMENSION {n}", ln)
        try:
            v = float(tok)
        except ValueError:
            raise TsplibParseError(f"non-numeric weight {tok!r}", ln) from None
        if not math.isfinite(v):
            raise TsplibParseError(f"non-finite weight {tok!r}", ln)
        values.append(v)
        last_line = ln
    if len(values) != expected:
        raise TsplibParseError(f"expected {expected} weights for DIMENSION {n}, found {len(values)}", last_line)

    m = np.zeros((n, n))
    it = iter(values)
    if fmt == "FULL_MATRIX":
        m[:, :] = np.array(values).reshape(n, n)
    else:
        for i in range(n):
            if fmt == "UPPER_ROW":
                cols = range(i + 1, n)
            elif fmt == "LOWER_ROW":
                cols = range(i)
            elif fmt == "UPPER_DIAG_ROW":
                cols = range(i, n)
            else:
                cols = range(i + 1)
            for j in cols:
                m[i, j] = m[j, i] = next(it)
    np.fill_diagonal(m, 0.0)
    if np.any(m < 0):
        raise TsplibParseError("negative weights are not supported")

    scale, unit = 1, "unitless"
    for cm in comments:
        if (mt := _SCALE_RE.search(cm)):
            scale = int(mt.group(1))
        if (mt := _UNIT_RE.search(cm)) and mt.group(1) in COST_UNITS:
            unit = mt.group(1)
    if scale < 1:
        raise TsplibParseError("SCALE tag must be positive")
    if scale != 1:
        m /= scale
    symmetric = bool(np.array_equal(m, m.T))
    if typ == "TSP" and not symmetric:
        raise TsplibParseError("TYPE TSP but the weight matrix is not symmetric")
    return CostMatrix(m, symmetric, unit)


def export_tour(order, name: str = "tomography") -> str:
    """TSPLIB ``.tour`` text with 1-based indices terminated by -1."""
    order = list(order.order if hasattr(order, "order") else order)
    n = len(order)
    if sorted(order) != list(range(n)):
        raise InvalidArgumentError("tour is not a permutation")
    lines = [f"NAME : {name}", "TYPE : TOUR", f"DIMENSION : {n}", "TOUR_SECTION"]
    lines.extend(str(i + 1) for i in order)
    lines.extend(["-1", "EOF"])
    return "\n".join(lines) + "\n"


def import_tour(text: str) -> list[int]:
    """Parse a ``.tour`` file into 0-based indices."""
    header, _, lines, lineno, section = _parse_header(text)
    if section != "TOUR_SECTION":
        raise TsplibParseError("missing TOUR_SECTION", lineno)
    dim = header.get("DIMENSION")
    try:
        n = int(dim) if dim is not None else None
    except ValueError:
        raise TsplibParseError(f"invalid DIMENSION {dim!r}") from None
    order = []
    seen = set()
    terminated = False
    for idx in range(lineno, len(lines)):
        line = lines[idx].strip()
        if not line:
            continue
        if line == "EOF":
            break
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise TsplibParseError(f"non-integer tour entry {tok!r}", idx + 1) from None
            if v == -1:
                terminated = True
                break
            if v < 1 or (n is not None and v > n):
                raise TsplibParseError(f"tour index {v} out of range", idx + 1)
            if v in seen:
                raise TsplibParseError(f"duplicate tour index {v}", idx + 1)
            seen.add(v)
            order.append(v - 1)
        if terminated:
            break
    if not terminated:
        raise TsplibParseError("TOUR_SECTION not terminated by -1")
    if n is None:
        n = len(order)
    if len(order) != n or set(order) != set(range(n)):
        raise TsplibParseError(f"tour lists {len(order)} of {n} nodes")
    return order
