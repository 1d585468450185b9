"""Node-set generators and the CSV point-file format.

File format::

    # optional comment lines
    d=3
    0.1,0.2,0.3
    ...

Points outside the unit cube are accepted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _rng
from .errors import InputError, PointsParseError
from .geometry import PointSet

MAX_MIDPOINT_NODES = 10 ** 7


def midpoint_product(d, m):
    """The ``m**d`` product midpoint rule with coordinates ``(2j - 1) / (2m)``."""
    if int(d) != d or d < 1 or int(m) != m or m < 1:
        raise InputError(f"midpoint rule needs positive integers d and m, got d={d}, m={m}")
    d, m = int(d), int(m)
    if m ** d > MAX_MIDPOINT_NODES:
        raise InputError(f"midpoint rule with m={m}, d={d} has {m}**{d} nodes, above the {MAX_MIDPOINT_NODES} limit")
    axis = (2 * np.arange(1, m + 1) - 1) / (2 * m)
    grid = np.array(list(itertools.product(axis, repeat=d)), dtype=np.float64)
    return PointSet(grid.reshape(m ** d, d))


def uniform_random(d, n, seed=0):
    if int(d) != d or d < 1 or int(n) != n or n < 1:
        raise InputError(f"random rule needs positive integers d and n, got d={d}, n={n}")
    rng = _rng.generator(seed, _rng.TAG_RULE, int(d), int(n))
    return PointSet(rng.random((int(n), int(d))))


def save_points(P: PointSet, path):
    lines = [f"d={P.d}"]
    lines.extend(",".join(repr(float(v)) for v in row) for row in P.points)
    Path(path).write_text("\n".join(lines) + "\n")


def load_points(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PointsParseError(f"cannot read point file: {exc.strerror}", path=path) from None
    d = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if d is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "d":
                raise PointsParseError(f"expected header 'd=<int>', got {line!r}", lineno, path)
            try:
                d = int(value.strip())
            except ValueError:
                raise PointsParseError(f"dimension {value.strip()!r} is not an integer", lineno, path) from None
            if d < 1:
                raise PointsParseError(f"dimension must be positive, got {d}", lineno, path)
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != d:
            raise PointsParseError(f"expected {d} fields, found {len(fields)}", lineno, path)
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise PointsParseError(f"non-numeric field in {line!r}", lineno, path) from None
        if not all(np.isfinite(row)):
            raise PointsParseError(f"non-finite coordinate in {line!r}", lineno, path)
        rows.append(row)
    if d is None:
        raise PointsParseError("missing 'd=<int>' header", path=path)
    if not rows:
        raise PointsParseError("no points after header", path=path)
    return PointSet(np.array(rows, dtype=np.float64))


@dataclass(frozen=True)
class RuleSpec:
    kind: str
    d: int
    size: int | None = None
    seed: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind in ("midpoint", "uniform_random"):
            if self.size is None or self.path is not None:
                raise InputError(f"rule kind {self.kind!r} takes a size and no path")
        elif self.kind == "file":
            if self.path is None or self.size is not None:
                raise InputError("rule kind 'file' takes a path and no size")
        else:
            raise InputError(f"unknown rule kind {self.kind!r}")

    @classmethod
    def parse(cls, text, d, seed=0):
        """Parse ``midpoint:m`` or ``random:n``."""
        kind, sep, size = text.partition(":")
        if not sep:
            raise InputError(f"rule must look like midpoint:m or random:n, got {text!r}")
        try:
            size = int(size)
        except ValueError:
            raise InputError(f"rule size {size!r} is not an integer") from None
        if kind == "midpoint":
            return cls("midpoint", d, size)
        if kind == "random":
            return cls("uniform_random", d, size, seed=seed)
        raise InputError(f"unknown rule {kind!r}; expected midpoint or random")

    def build(self):
        if self.kind == "midpoint":
            return midpoint_product(self.d, self.size)
        if self.kind == "uniform_random":
            return uniform_random(self.d, self.size, 0 if self.seed is None else self.seed)
        P = load_points(self.path)
        if self.d is not None and P.d != self.d:
            raise InputError(f"{self.path} holds {P.d}-dimensional points but d={self.d} was requested")
        return P
