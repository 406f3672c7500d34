"""The normalized Fenchel-Nielsen map and the local biLipschitz harness.

Relative to a base surface ``X0`` each cuff contributes a log length ratio
``lam`` and each interior cuff a twist difference ``tau`` divided by
``max(1, |log l(X0)|)``. Boundary cuffs have no twist component; their ``tau``
slot holds 0 and is masked out of every norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import beta_curve, geodesic_length
from .errors import BoundaryCuff, IndexMismatch, NumericalDegeneration, ValidationError
from .pants_surface import PantsSurface
from .spectrum import CurveFamily, dls_estimate, family_lengths, same_graph

MAX_RADIUS = 0.5
MIN_SEPARATION = 1e-9


def twist_scale(l: float) -> float:
    return max(1.0, abs(math.log(l)))


@dataclass(frozen=True)
class FNVector:
    lam: np.ndarray
    tau: np.ndarray
    interior: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        tau = np.asarray(self.tau, dtype=float)
        mask = np.asarray(self.interior, dtype=bool)
        if not (lam.shape == tau.shape == mask.shape) or lam.ndim != 1:
            raise IndexMismatch("lam, tau and interior must be 1-d arrays of one length")
        tau = np.where(mask, tau, 0.0)
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(tau))):
            raise ValidationError("FN vector entries must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "interior", mask)

    @classmethod
    def zero(cls, s: PantsSurface) -> "FNVector":
        n = len(s.graph.cuffs)
        return cls(np.zeros(n), np.zeros(n), [c.interior for c in s.graph.cuffs])

    @property
    def sup_norm(self) -> float:
        parts = [np.abs(self.lam)]
        if self.interior.any():
            parts.append(np.abs(self.tau[self.interior]))
        return float(max(p.max(initial=0.0) for p in parts))

    def __add__(self, other: "FNVector") -> "FNVector":
        self._same_shape(other)
        return FNVector(self.lam + other.lam, self.tau + other.tau, self.interior)

    def __sub__(self, other: "FNVector") -> "FNVector":
        self._same_shape(other)
        return FNVector(self.lam - other.lam, self.tau - other.tau, self.interior)

    def _same_shape(self, other):
        if self.lam.shape != other.lam.shape or not np.array_equal(self.interior, other.interior):
            raise IndexMismatch("FN vectors index different cuff sets")

    def to_dict(self, s: PantsSurface) -> dict:
        out = []
        for k, c in enumerate(s.graph.cuffs):
            entry = {"id": c.id, "lam": float(self.lam[k])}
            if c.interior:
                entry["tau"] = float(self.tau[k])
            out.append(entry)
        return {"entries": out, "sup_norm": self.sup_norm}

    @classmethod
    def from_dict(cls, s: PantsSurface, data: dict) -> "FNVector":
        entries = {int(e["id"]): e for e in data.get("entries", [])}
        ids = [c.id for c in s.graph.cuffs]
        if set(entries) != set(ids):
            missing = sorted(set(ids) - set(entries))
            extra = sorted(set(entries) - set(ids))
            raise IndexMismatch(f"FN vector cuffs do not match the surface "
                                f"(missing {missing}, unknown {extra})")
        lam = [float(entries[c]["lam"]) for c in ids]
        tau = []
        for c in s.graph.cuffs:
            if not c.interior and entries[c.id].get("tau") not in (None, 0, 0.0):
                raise BoundaryCuff(f"cuff {c.id}: boundary cuffs have no twist component")
            tau.append(float(entries[c.id].get("tau", 0.0)))
        return cls(np.array(lam), np.array(tau), [c.interior for c in s.graph.cuffs])


def fn_forward(X0: PantsSurface, X: PantsSurface) -> FNVector:
    same_graph(X0, X)
    l0 = np.array(X0.lengths)
    lam = np.log(np.array(X.lengths) / l0)
    scale = np.array([twist_scale(l) for l in X0.lengths])
    tau = (np.array(X.twists) - np.array(X0.twists)) / scale
    return FNVector(lam, tau, [c.interior for c in X0.graph.cuffs])


def fn_inverse(X0: PantsSurface, v: FNVector) -> PantsSurface:
    n = len(X0.graph.cuffs)
    if v.lam.shape != (n,):
        raise IndexMismatch(f"FN vector has {v.lam.shape[0]} entries, surface has {n} cuffs")
    mask = [c.interior for c in X0.graph.cuffs]
    if list(v.interior) != mask:
        bad = [c.id for c, m, w in zip(X0.graph.cuffs, mask, v.interior) if m != w]
        raise IndexMismatch(f"FN vector disagrees on interior cuffs {bad}")
    lengths = tuple(l * math.exp(x) for l, x in zip(X0.lengths, v.lam))
    twists = tuple(t + x * twist_scale(l) if m else t
                   for t, x, l, m in zip(X0.twists, v.tau, X0.lengths, mask))
    return PantsSurface(X0.graph, lengths, twists, X0.M0)


@dataclass(frozen=True)
class TwistDecomposition:
    k: int
    t_tilde: float


def twist_decompose(t: float, l: float) -> TwistDecomposition:
    """t = k l + t_tilde with 0 <= t_tilde < l."""
    if not l > 0:
        raise ValidationError(f"cuff length {l!r} must be positive")
    k = math.floor(t / l)
    r = t - k * l
    # floor(t / l) can be off by one when t / l rounds across an integer
    if r < 0:
        k -= 1
        r = t - k * l
    elif r >= l:
        k += 1
        r = t - k * l
    return TwistDecomposition(k, max(r, 0.0))


# --- biLipschitz probe -------------------------------------------------------

@dataclass
class ProbeSample:
    index: int
    dist: float
    dls: float
    ratio: float
    argmax: str | None


@dataclass
class ProbeReport:
    samples: list[ProbeSample]
    degenerate: list[tuple[int, str]] = field(default_factory=list)
    resampled: int = 0

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s.ratio for s in self.samples])

    @property
    def min_ratio(self) -> float:
        return float(self.ratios.min())

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    @property
    def distortion(self) -> float:
        lo = self.min_ratio
        return math.inf if lo == 0 else self.max_ratio / lo

    def summary(self) -> dict:
        return {"samples": len(self.samples), "min_ratio": self.min_ratio,
                "max_ratio": self.max_ratio, "distortion": self.distortion,
                "resampled": self.resampled,
                "degenerate": [{"sample": i, "reason": r} for i, r in self.degenerate]}


def _ball_point(rng: np.random.Generator, center: FNVector, radius: float) -> FNVector:
    n = center.lam.shape[0]
    return FNVector(center.lam + rng.uniform(-radius, radius, n),
                    center.tau + rng.uniform(-radius, radius, n), center.interior)


def bilipschitz_probe(X0: PantsSurface, center: FNVector, radius: float, samples: int,
                      fam: CurveFamily, seed: int) -> ProbeReport:
    """Ratios d_ls estimate / sup-distance for random pairs in a sup-ball.

    Each pair draws from its own child of ``SeedSequence(seed)``, so the
    report depends only on the seed and the sample count.
    """
    if not 0 < radius <= MAX_RADIUS:
        raise ValidationError(f"radius {radius} must lie in (0, {MAX_RADIUS}]")
    if samples < 2:
        raise ValidationError(f"need at least 2 samples, got {samples}")
    fam.validate(X0)
    rows, degenerate, resampled = [], [], 0
    for idx, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        rng = np.random.default_rng(child)
        while True:
            a = _ball_point(rng, center, radius)
            b = _ball_point(rng, center, radius)
            dist = (a - b).sup_norm
            if dist >= MIN_SEPARATION:
                break
            resampled += 1
        try:
            Xa, Xb = fn_inverse(X0, a), fn_inverse(X0, b)
            rep = dls_estimate(Xa, Xb, fam, lengths_X=family_lengths(Xa, fam))
        except NumericalDegeneration as exc:
            degenerate.append((idx, str(exc)))
            continue
        for label, reason in rep.skipped:
            degenerate.append((idx, f"{label}: {reason}"))
        rows.append(ProbeSample(idx, dist, rep.dls_estimate, rep.dls_estimate / dist,
                                rep.argmax_label))
    if not rows:
        raise NumericalDegeneration("every probe sample degenerated")
    return ProbeReport(rows, degenerate, resampled)


# --- normalization necessity -------------------------------------------------

DEFAULT_SWEEP = tuple(10.0 ** -k for k in range(1, 9))


@dataclass
class TwistResponse:
    lengths: list[float]
    offsets: list[float]
    responses: list[float]
    exponent: float | None

    def rows(self):
        return list(zip(self.lengths, self.offsets, self.responses))


def unnormalized_twist_response(X0: PantsSurface, cuff: int, tau_raw: float,
                                sweep=DEFAULT_SWEEP, normalized: bool = False) -> TwistResponse:
    """Beta-curve response |log l(Y)/l(X)| to a twist offset as the cuff shrinks.

    For each ``l`` in ``sweep`` the cuff of ``X0`` is set to ``l`` giving ``X``,
    and ``Y`` adds ``tau_raw`` to its twist (times ``max(1, |log l|)`` when
    ``normalized``). The exponent is the least-squares slope of log g
    against log |log l|, None when any response vanishes.
    """
    c = X0.graph.cuff(cuff)
    if not c.interior:
        raise BoundaryCuff(f"cuff {cuff} is a boundary cuff")
    w0 = beta_curve(X0, cuff)
    ls, offs, gs = [], [], []
    for l in sweep:
        X = X0.replace(lengths={cuff: l})
        off = tau_raw * twist_scale(l) if normalized else tau_raw
        Y = X.replace(twists={cuff: X.twist(cuff) + off})
        w = w0.with_windings(cuff, -math.floor(X.twist(cuff) / l))
        g = abs(math.log(geodesic_length(Y, w, check=False) / geodesic_length(X, w, check=False)))
        ls.append(float(l))
        offs.append(off)
        gs.append(g)
    exponent = None
    if len(ls) >= 2 and all(g > 0 for g in gs):
        x = np.log(np.abs(np.log(ls)))
        exponent = float(np.polyfit(x, np.log(gs), 1)[0])
    return TwistResponse(ls, offs, gs, exponent)
