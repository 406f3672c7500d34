"""Length-spectrum comparison of two marked surfaces over a finite curve family.

The supremum over all simple closed curves is replaced by a maximum over a
:class:`CurveFamily`, so every estimate here is a lower bound for the true
length-spectrum distance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .curves import CurveWord, apply_full_twists, beta_curve, geodesic_length, validate
from .errors import GraphMismatch, NumericalDegeneration, ValidationError
from .pants_surface import PantsSurface
from .twist_flow import k_full_twists


@dataclass(frozen=True)
class CurveFamily:
    labels: tuple[str, ...]
    words: tuple[CurveWord, ...]
    description: str = ""

    def __post_init__(self):
        if not self.words:
            raise ValidationError("curve family is empty")
        if len(self.labels) != len(self.words):
            raise ValidationError("one label per word")

    def __len__(self):
        return len(self.words)

    def __add__(self, other: "CurveFamily") -> "CurveFamily":
        return CurveFamily(self.labels + other.labels, self.words + other.words,
                           f"{self.description} + {other.description}")

    def validate(self, s: PantsSurface):
        for label, w in zip(self.labels, self.words):
            try:
                validate(w, s.graph)
            except ValidationError as exc:
                raise type(exc)(f"curve {label}: {exc}") from None


@dataclass
class SpectrumRow:
    label: str
    lX: float
    lY: float
    abslogratio: float


@dataclass
class SpectrumReport:
    rows: list[SpectrumRow]
    dls_estimate: float
    argmax_label: str | None
    family_size: int
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["label", "lX", "lY", "abslogratio"])
        for r in self.rows:
            wr.writerow([r.label, repr(r.lX), repr(r.lY), repr(r.abslogratio)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"dls": self.dls_estimate, "argmax": self.argmax_label,
                "family_size": self.family_size,
                "skipped": [{"label": l, "reason": r} for l, r in self.skipped]}


def same_graph(X: PantsSurface, Y: PantsSurface) -> None:
    if X.graph != Y.graph:
        raise GraphMismatch("surfaces are built on different pants graphs")


def family_lengths(s: PantsSurface, fam: CurveFamily) -> list[float | None]:
    out = []
    for w in fam.words:
        try:
            out.append(geodesic_length(s, w, check=False))
        except NumericalDegeneration:
            out.append(None)
    return out


def dls_estimate(X: PantsSurface, Y: PantsSurface, fam: CurveFamily,
                 lengths_X=None) -> SpectrumReport:
    """Half the largest |log length ratio| over the family.

    ``lengths_X`` may carry precomputed lengths on ``X`` (as returned by
    :func:`family_lengths`) when one surface is compared against many.
    """
    same_graph(X, Y)
    fam.validate(X)
    lx_all = lengths_X if lengths_X is not None else family_lengths(X, fam)
    ly_all = family_lengths(Y, fam)
    rows, skipped = [], []
    best, arg = 0.0, None
    for label, lx, ly in zip(fam.labels, lx_all, ly_all):
        if lx is None or ly is None:
            skipped.append((label, "not hyperbolic on " + ("X" if lx is None else "Y")))
            continue
        r = abs(math.log(ly / lx))
        rows.append(SpectrumRow(label, lx, ly, r))
        if arg is None or r > best:
            best, arg = r, label
    return SpectrumReport(rows, 0.5 * best, arg, len(fam), skipped)


def cuff_family(s: PantsSurface) -> CurveFamily:
    ids = [c.id for c in s.graph.cuffs]
    return CurveFamily(tuple(f"cuff:{c}" for c in ids),
                       tuple(CurveWord.cuff_curve(c) for c in ids), "cuffs")


def default_family(s: PantsSurface, k_grid=(), eps0: float | None = None) -> CurveFamily:
    """Cuffs, the beta curve of every interior cuff, and its twisted variants.

    Windings are counted from the reference surface ``s``: beta curves first
    absorb the integer part of the twist, so that on ``s`` each crossing is
    shifted by the normalized twist plus ``k`` full turns. With ``eps0`` the
    per-cuff twist count from :func:`pantsfn.twist_flow.k_full_twists` is
    added with both signs.
    """
    labels, words = [], []
    for c in s.graph.cuffs:
        labels.append(f"cuff:{c.id}")
        words.append(CurveWord.cuff_curve(c.id))
    ks_all = sorted({int(k) for k in k_grid} | {-int(k) for k in k_grid})
    for c in s.graph.cuffs:
        if not c.interior:
            continue
        l, t = s.length(c.id), s.twist(c.id)
        base = beta_curve(s, c.id).with_windings(c.id, -math.floor(t / l))
        labels.append(f"beta:{c.id}")
        words.append(base)
        ks = set(ks_all)
        if eps0 is not None:
            k = k_full_twists(l, eps0)
            ks |= {k, -k}
        for k in sorted(ks):
            if k == 0:
                continue
            labels.append(f"beta:{c.id}:k={k}")
            words.append(apply_full_twists(base, c.id, k))
    desc = f"default(k_grid={list(ks_all)}" + (f", eps0={eps0})" if eps0 is not None else ")")
    return CurveFamily(tuple(labels), tuple(words), desc)


@dataclass
class WolpertResult:
    holds: bool
    worst_ratio: float
    worst_label: str | None


def wolpert_check(X: PantsSurface, Y: PantsSurface, K: float, fam: CurveFamily,
                  rtol: float = 1e-12) -> WolpertResult:
    """Every family ratio l(Y)/l(X) inside [1/K, K]? Reports the extremal ratio."""
    if K < 1:
        raise ValidationError(f"K = {K} must be >= 1")
    rep = dls_estimate(X, Y, fam)
    worst, label = 1.0, None
    for r in rep.rows:
        ratio = r.lY / r.lX
        if label is None or abs(math.log(ratio)) > abs(math.log(worst)):
            worst, label = ratio, r.label
    bound = math.log(K) * (1 + rtol) + rtol
    return WolpertResult(abs(math.log(worst)) <= bound, worst, label)
