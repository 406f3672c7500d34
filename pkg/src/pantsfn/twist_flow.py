"""Twist deformations along cuffs and the first variation of geodesic length."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .curves import (
    CurveWord,
    apply_full_twists,
    beta_curve,
    crossing_cosines,
    geodesic_length,
    random_word,
    validate,
)
from .errors import GraphMismatch, NoCrossing, ValidationError
from .families import chain_graph, genus_two_graph, one_holed_torus_graph, random_surface, tree_graph
from .pants_surface import PantsSurface

DEFAULT_EPS0 = 0.5


def twist_path(X: PantsSurface, t_n: Mapping[int, float], t: float) -> PantsSurface:
    """``X`` with ``t * t_n[c]`` added to the twist of every listed cuff."""
    return X.replace(twists={c: X.twist(c) + t * v for c, v in t_n.items()})


def length_derivative(X: PantsSurface, w: CurveWord, cuff: int) -> float:
    """d length(w) / d twist(cuff), as the sum of cos over the crossings."""
    if w.peripheral is not None:
        raise NoCrossing(f"cuff curve {w.peripheral} crosses no cuff")
    validate(w, X.graph)
    return math.fsum(crossing_cosines(X, w, cuff))


def finite_difference(X: PantsSurface, w: CurveWord, cuff: int, h: float = 1e-4) -> float:
    up = geodesic_length(twist_path(X, {cuff: 1.0}, h), w)
    down = geodesic_length(twist_path(X, {cuff: 1.0}, -h), w)
    return (up - down) / (2.0 * h)


def k_full_twists(l: float, eps0: float = DEFAULT_EPS0) -> int:
    """Full twists that push every crossing angle of a beta curve to cos >= eps0."""
    if not l > 0:
        raise ValidationError(f"cuff length {l!r} must be positive")
    if not 0 < eps0 < 1:
        raise ValidationError(f"eps0 = {eps0!r} must lie in (0, 1)")
    return math.floor(math.log((1 + eps0) / (1 - eps0)) / l) + 2


def _check_grid(t_grid: Sequence[float]):
    if len(t_grid) < 3:
        raise ValidationError("convexity grid needs at least 3 points")
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValidationError("convexity grid must be strictly increasing")


def lengths_along(X: PantsSurface, w: CurveWord, cuff: int, t_grid: Sequence[float]) -> list[float]:
    """Geodesic length of ``w`` at twist offsets ``t_grid`` on ``cuff``."""
    if w.peripheral is not None or not w.crossings(cuff):
        raise NoCrossing(f"word does not cross cuff {cuff}")
    validate(w, X.graph)
    return [geodesic_length(twist_path(X, {cuff: 1.0}, t), w, check=False) for t in t_grid]


def second_differences(t_grid: Sequence[float], values: Sequence[float]) -> list[float]:
    """Divided second differences; exact for quadratics on uneven grids."""
    out = []
    for k in range(1, len(t_grid) - 1):
        t0, t1, t2 = t_grid[k - 1], t_grid[k], t_grid[k + 1]
        s1 = (values[k] - values[k - 1]) / (t1 - t0)
        s2 = (values[k + 1] - values[k]) / (t2 - t1)
        out.append(2.0 * (s2 - s1) / (t2 - t0))
    return out


def convexity_check(X: PantsSurface, w: CurveWord, cuff: int, t_grid: Sequence[float],
                    tol: float = 1e-9) -> bool:
    _check_grid(t_grid)
    vals = lengths_along(X, w, cuff, t_grid)
    return all(d >= -tol for d in second_differences(t_grid, vals))


@dataclass
class MVTBound:
    cuff: int
    twist_difference: float
    k: int
    lhs: float
    rhs: float
    constant: float | None
    length_gain: float
    min_gain: float
    holds: bool


def mvt_twist_bound(X: PantsSurface, Y: PantsSurface, cuff: int,
                    eps0: float = DEFAULT_EPS0, fam_k: int | None = None) -> MVTBound:
    """Twist difference on ``cuff`` controlled by the length change of a twisted beta curve.

    ``lhs`` is |t_n| / max(1, |log l|) and ``rhs`` is |log(l(Y) / l(X))| for the
    beta curve carried ``fam_k`` full turns past its position on ``X`` in the
    direction of the twist difference. Along the path every crossing has
    cos >= eps0 (or <= -eps0 when twisting backwards), so the length grows by
    at least eps0 |t_n| per crossing; ``holds`` checks that gain, and
    ``constant`` is eps0 * lhs / rhs.
    """
    if X.graph != Y.graph:
        raise GraphMismatch("surfaces are built on different pants graphs")
    w0 = beta_curve(X, cuff)
    l = X.length(cuff)
    if Y.lengths != X.lengths:
        raise ValidationError("mvt bound needs surfaces with equal cuff lengths")
    for c in X.graph.cuffs:
        if c.id != cuff and X.twist(c.id) != Y.twist(c.id):
            raise ValidationError(f"surfaces also differ in the twist on cuff {c.id}")
    if fam_k is None:
        fam_k = k_full_twists(l, eps0)
    dt = Y.twist(cuff) - X.twist(cuff)
    sign = -1 if dt < 0 else 1
    base = w0.with_windings(cuff, -math.floor(X.twist(cuff) / l))
    w = apply_full_twists(base, cuff, sign * fam_k)
    lx = geodesic_length(X, w, check=False)
    ly = geodesic_length(Y, w, check=False)
    lhs = abs(dt) / max(1.0, abs(math.log(l)))
    rhs = abs(math.log(ly / lx))
    gain = ly - lx
    need = eps0 * abs(dt) * len(w.crossings(cuff))
    constant = eps0 * lhs / rhs if rhs > 0 else None
    holds = gain >= need * (1 - 1e-9) - 1e-12
    return MVTBound(cuff, dt, sign * fam_k, lhs, rhs, constant, gain, need, holds)


@dataclass
class DerivativeTrial:
    trial: int
    graph: str
    cuff: int
    exact: float
    fd: float

    @property
    def error(self) -> float:
        return abs(self.exact - self.fd)


def derivative_trials(seed: int, trials: int, h: float = 1e-4, lo: float = 1e-3,
                      hi: float = 1.0) -> list[DerivativeTrial]:
    """Exact derivative against central differences on random (surface, word, cuff).

    Surfaces cycle through small graph families with log-uniform cuffs in
    [lo, hi]; words alternate between random closed walks and beta curves.
    """
    graphs = [("genus2", genus_two_graph()), ("torus", one_holed_torus_graph()),
              ("chain3", chain_graph(3)), ("tree4", tree_graph(4))]
    nrng = np.random.default_rng(seed)
    prng = random.Random(seed)
    out = []
    for k in range(trials):
        name, g = graphs[k % len(graphs)]
        s = random_surface(g, lo, hi, nrng)
        if k % 2:
            w = random_word(g, prng, n_cross=prng.randint(1, 4), max_winding=2)
        else:
            w = beta_curve(g, prng.choice(g.interior_cuffs))
        cuff = prng.choice(sorted(w.intersection))
        out.append(DerivativeTrial(k, name, cuff, length_derivative(s, w, cuff),
                                   finite_difference(s, w, cuff, h)))
    return out
