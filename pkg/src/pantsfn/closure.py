"""Tail behaviour of twist offsets against shrinking cuffs.

A surface ``X`` is compared to a base ``X0`` on the same graph. Its twist
offsets are measured against ``|log l(X0)|`` over the cuffs that are at least
a given depth into the thin part. Truncating every offset at level ``i``
gives surfaces with bounded offsets that approach ``X`` as ``i`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import UnknownGenerator, ValidationError
from .families import chain_graph
from .pants_surface import PantsSurface, build_base
from .spectrum import CurveFamily, dls_estimate, family_lengths, same_graph

# Below this many units of |log l| between the shallowest and deepest cuff
# there is no tail to speak of.
_MIN_TAIL = 1.0


@dataclass(frozen=True)
class FNGenerator:
    """Closed-form cuff data: ``length(n)`` and twist offset ``offset(n)`` for n >= 1."""

    name: str
    length: Callable[[int], float]
    offset: Callable[[int], float]
    note: str = ""

    def surfaces(self, depth: int, boundary: float = 1.0) -> tuple[PantsSurface, PantsSurface]:
        """(X0, X) on a chain of ``depth + 1`` pants.

        Interior cuff ``n - 1`` realizes index ``n``; X0 has zero twists.
        """
        if depth < 1:
            raise ValidationError(f"depth {depth} must be >= 1")
        g = chain_graph(depth + 1)
        lengths, offsets = [], []
        for c in g.cuffs:
            if c.interior:
                n = c.id + 1
                lengths.append(float(self.length(n)))
                offsets.append(float(self.offset(n)))
            else:
                lengths.append(boundary)
                offsets.append(0.0)
        M0 = max(lengths)
        X0 = build_base(g, lengths, M0)
        X = PantsSurface(g, X0.lengths, tuple(offsets), M0)
        return X0, X


def _exp_len(n):
    return math.exp(-n)


GENERATORS = {
    "sqrt": FNGenerator("sqrt", _exp_len, lambda n: math.sqrt(n),
                        "offset sqrt|log l|: o(|log l|)"),
    "half": FNGenerator("half", _exp_len, lambda n: 0.5 * n,
                        "offset |log l|/2: ratio fixed at 1/2"),
    "linear": FNGenerator("linear", _exp_len, lambda n: float(n),
                          "offset |log l|: ratio fixed at 1"),
    "loglog": FNGenerator("loglog", _exp_len, lambda n: n / math.log(1 + n),
                          "offset |log l|/log(1+n): slowly o(|log l|)"),
    "const": FNGenerator("const", _exp_len, lambda n: 1.0,
                         "bounded offset on shrinking cuffs"),
    "bounded_below": FNGenerator("bounded_below", lambda n: 0.5,
                                 lambda n: 2.0 * (-1) ** n,
                                 "cuffs bounded below: the tail condition is vacuous"),
}


def generator(name: str) -> FNGenerator:
    try:
        return GENERATORS[name]
    except KeyError:
        raise UnknownGenerator(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None


@dataclass
class ClosureVerdict:
    verdict: str
    grid: list[float]
    tail: list[float]
    floor: float
    log_range: tuple[float, float]
    max_log_ratio: float

    def summary(self) -> dict:
        return {"verdict": self.verdict, "floor": self.floor,
                "log_range": list(self.log_range), "max_log_ratio": self.max_log_ratio,
                "grid": self.grid, "tail": self.tail}


def tail_statistic(depths: np.ndarray, ratios: np.ndarray, s: float) -> float:
    sel = depths >= s
    return float(ratios[sel].max()) if sel.any() else 0.0


def closure_criterion(X0: PantsSurface, X: PantsSurface, window: float = 1.0) -> ClosureVerdict:
    """Tail statistic T(s) = max |dt| / |log l| over cuffs with |log l| >= s.

    ``s`` runs from the shallowest to the deepest interior cuff in steps of
    ``window``. The verdict is "consistent" when T at the deepest level is at
    most half its initial value (or T vanishes), "inconsistent" otherwise,
    with ``floor`` the smallest T seen; "vacuous" when the cuffs do not
    reach into a tail at all.
    """
    same_graph(X0, X)
    if not window > 0:
        raise ValidationError(f"window {window} must be positive")
    ids = X0.graph.interior_cuffs
    l0 = np.array([X0.length(c) for c in ids])
    depths = np.abs(np.log(l0))
    dt = np.abs(np.array([X.twist(c) - X0.twist(c) for c in ids]))
    ratios = dt / np.maximum(1.0, depths)
    log_ratio = max((abs(math.log(a / b)) for a, b in zip(X.lengths, X0.lengths)), default=0.0)
    if not ids:
        return ClosureVerdict("vacuous", [], [], 0.0, (0.0, 0.0), log_ratio)
    lo, hi = float(depths.min()), float(depths.max())
    grid = list(np.arange(lo, hi + 0.5 * window, window)) if hi > lo else [lo]
    grid = [float(s) for s in grid if s <= hi]
    tail = [tail_statistic(depths, ratios, s) for s in grid]
    floor = min(tail)
    if hi - lo < _MIN_TAIL:
        verdict = "vacuous"
    elif tail[0] == 0 or tail[-1] <= 0.5 * tail[0]:
        verdict = "consistent"
    else:
        verdict = "inconsistent"
    return ClosureVerdict(verdict, grid, tail, floor, (lo, hi), log_ratio)


def approx_sequence(X0: PantsSurface, X: PantsSurface, i: float) -> PantsSurface:
    """Lengths of ``X``; twist offsets from ``X0`` clipped to magnitude ``i``."""
    same_graph(X0, X)
    if not i >= 0:
        raise ValidationError(f"truncation level {i} must be >= 0")
    twists = []
    for c, t0, t in zip(X0.graph.cuffs, X0.twists, X.twists):
        d = t - t0
        if c.interior and abs(d) > i:
            twists.append(t0 + math.copysign(i, d))
        else:
            twists.append(t)
    return PantsSurface(X.graph, X.lengths, tuple(twists), X.M0)


@dataclass
class StudyRow:
    i: float
    dls: float
    argmax: str | None


def convergence_study(X0: PantsSurface, X: PantsSurface, i_grid: Sequence[float],
                      fam: CurveFamily) -> list[StudyRow]:
    """dls estimate between each truncation ``X_i`` and ``X``."""
    if any(b <= a for a, b in zip(i_grid, i_grid[1:])):
        raise ValidationError("i grid must be strictly increasing")
    same_graph(X0, X)
    fam.validate(X)
    lengths_X = family_lengths(X, fam)
    rows = []
    for i in i_grid:
        rep = dls_estimate(X, approx_sequence(X0, X, i), fam, lengths_X=lengths_X)
        rows.append(StudyRow(float(i), rep.dls_estimate, rep.argmax_label))
    return rows


def study_floor(rows: Sequence[StudyRow], i_max: float) -> float:
    """Smallest column value over rows with i <= i_max."""
    vals = [r.dls for r in rows if r.i <= i_max]
    if not vals:
        raise ValidationError(f"no study rows with i <= {i_max}")
    return min(vals)
