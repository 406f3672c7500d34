"""Closed curves on a pants graph as words of crossings and traverses.

A word alternates :class:`Traverse` steps (through a pants, from the slot of
arrival to the slot of departure; equal slots follow the self-perpendicular
arc, entered from the foot on the left unless ``backward``) and
:class:`Cross` steps (over an interior cuff, shifted by ``winding``
full turns). The cuff curves themselves have no such word and are
represented with ``peripheral`` set instead.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Union

from .errors import BadPath, BoundaryCuff, NoCrossing
from .hyp_core import HALF_TURN_LEFT, Isometry, endpoint_cosine, translation_length
from .pants_surface import PantsGraph, PantsSurface


@dataclass(frozen=True)
class Cross:
    cuff: int
    winding: int = 0


@dataclass(frozen=True)
class Traverse:
    pants: int
    slot_in: int
    slot_out: int
    backward: bool = False

    def __post_init__(self):
        if self.backward and self.slot_in != self.slot_out:
            raise BadPath(f"pants {self.pants}: only a self-perpendicular arc "
                          f"(equal slots) can be walked backward")


Step = Union[Cross, Traverse]


@dataclass(frozen=True)
class CurveWord:
    steps: tuple[Step, ...] = ()
    peripheral: int | None = None
    intersection: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        counts = Counter(st.cuff for st in self.steps if isinstance(st, Cross))
        object.__setattr__(self, "intersection", dict(counts))
        if self.peripheral is not None and self.steps:
            raise BadPath("a peripheral (cuff) word has no steps")
        if self.peripheral is None and not self.steps:
            raise BadPath("empty word")

    @classmethod
    def cuff_curve(cls, cid: int) -> "CurveWord":
        return cls((), peripheral=cid)

    def crossings(self, cid: int) -> list[int]:
        """Step indices of the crossings of ``cid``, in word order."""
        return [k for k, st in enumerate(self.steps) if isinstance(st, Cross) and st.cuff == cid]

    def rotated(self, k: int) -> "CurveWord":
        if self.peripheral is not None:
            return self
        k %= len(self.steps)
        return CurveWord(self.steps[k:] + self.steps[:k])

    def reversed(self) -> "CurveWord":
        if self.peripheral is not None:
            return self
        steps = []
        for st in reversed(self.steps):
            if isinstance(st, Traverse):
                backward = (not st.backward) if st.slot_in == st.slot_out else False
                steps.append(Traverse(st.pants, st.slot_out, st.slot_in, backward))
            else:
                steps.append(st)
        return CurveWord(tuple(steps))

    def with_windings(self, cid: int, windings) -> "CurveWord":
        """Set the winding of every crossing of ``cid`` (scalar or per occurrence)."""
        idx = self.crossings(cid)
        if isinstance(windings, int):
            windings = [windings] * len(idx)
        steps = list(self.steps)
        for k, w in zip(idx, windings):
            steps[k] = replace(steps[k], winding=int(w))
        return CurveWord(tuple(steps))

    def to_dict(self) -> dict:
        if self.peripheral is not None:
            return {"cuff": self.peripheral}
        out = []
        for st in self.steps:
            if isinstance(st, Cross):
                out.append({"cross": st.cuff, "winding": st.winding})
            elif st.backward:
                out.append({"traverse": [st.pants, st.slot_in, st.slot_out], "backward": True})
            else:
                out.append({"traverse": [st.pants, st.slot_in, st.slot_out]})
        return {"steps": out}

    @classmethod
    def from_dict(cls, data: dict) -> "CurveWord":
        if "cuff" in data:
            return cls.cuff_curve(int(data["cuff"]))
        steps = []
        for k, st in enumerate(data.get("steps", [])):
            if "cross" in st:
                steps.append(Cross(int(st["cross"]), int(st.get("winding", 0))))
            elif "traverse" in st:
                p, a, b = st["traverse"]
                steps.append(Traverse(int(p), int(a), int(b), bool(st.get("backward", False))))
            else:
                raise BadPath(f"step {k}: expected 'cross' or 'traverse'")
        return cls(tuple(steps))


def validate(w: CurveWord, graph: PantsGraph) -> None:
    if w.peripheral is not None:
        graph.cuff(w.peripheral)
        return
    steps = w.steps
    n = len(steps)
    if n % 2:
        raise BadPath(f"word of odd length {n} cannot alternate")
    for k, st in enumerate(steps):
        nxt = steps[(k + 1) % n]
        if isinstance(st, Traverse):
            if not isinstance(nxt, Cross):
                raise BadPath(f"step {k}: traverse must be followed by a crossing")
            if (st.pants, st.slot_out) not in graph.slot_map:
                raise BadPath(f"step {k}: pants {st.pants} slot {st.slot_out} does not exist")
            if (st.pants, st.slot_in) not in graph.slot_map:
                raise BadPath(f"step {k}: pants {st.pants} slot {st.slot_in} does not exist")
            cid = graph.slot_map[st.pants, st.slot_out]
            if cid != nxt.cuff:
                raise BadPath(f"step {k}: pants {st.pants} leaves through cuff {cid}, "
                              f"but step {k + 1} crosses cuff {nxt.cuff}")
            if not graph.cuff(cid).interior:
                raise BadPath(f"step {k + 1}: cuff {cid} is a boundary cuff")
        else:
            if not isinstance(nxt, Traverse):
                raise BadPath(f"step {k}: crossing must be followed by a traverse")
            prev = steps[k - 1]
            if not isinstance(prev, Traverse):
                raise BadPath(f"step {k}: crossing must follow a traverse")
            arrive = graph.other_end(st.cuff, prev.pants, prev.slot_out)
            if arrive != (nxt.pants, nxt.slot_in):
                raise BadPath(f"step {k}: crossing cuff {st.cuff} arrives at pants {arrive[0]} "
                              f"slot {arrive[1]}, not pants {nxt.pants} slot {nxt.slot_in}")


def _block(s: PantsSurface, st: Step) -> Isometry:
    if isinstance(st, Cross):
        return s.cross_block(st.cuff, st.winding)
    return s.traverse_block(st.pants, st.slot_in, st.slot_out, st.backward)


def holonomy(s: PantsSurface, w: CurveWord, start: int = 0) -> Isometry:
    """Holonomy of ``w`` read from step ``start`` (no validation)."""
    if w.peripheral is not None:
        p, slot = s.graph.cuff(w.peripheral).ends[0]
        return s.geometry[p].cuff_loop(slot)
    m = Isometry.identity()
    n = len(w.steps)
    for k in range(n):
        m = m @ _block(s, w.steps[(start + k) % n])
    return m


def cuff_crossing_holonomy(s: PantsSurface, w: CurveWord) -> Isometry:
    validate(w, s.graph)
    return holonomy(s, w)


def geodesic_length(s: PantsSurface, w: CurveWord, check: bool = True) -> float:
    """Length of the closed geodesic in the class of ``w``.

    Cuff curves return their Fenchel-Nielsen length directly; the trace of a
    short cuff's conjugated holonomy cannot resolve lengths below ~1e-6.
    """
    if w.peripheral is not None:
        return s.length(w.peripheral)
    if check:
        validate(w, s.graph)
    return translation_length(holonomy(s, w))


def beta_curve(s: PantsSurface | PantsGraph, cid: int) -> CurveWord:
    """The test curve crossing interior cuff ``cid``: two self-perpendiculars
    joined across the cuff, or the seam closed up when the pants is glued to
    itself along ``cid``."""
    graph = s.graph if isinstance(s, PantsSurface) else s
    cuff = graph.cuff(cid)
    if not cuff.interior:
        raise BoundaryCuff(f"cuff {cid} is a boundary cuff")
    (p1, i1), (p2, i2) = cuff.ends
    if cuff.self_glued:
        return CurveWord((Traverse(p1, i2, i1), Cross(cid, 0)))
    return CurveWord((Traverse(p1, i1, i1), Cross(cid, 0), Traverse(p2, i2, i2), Cross(cid, 0)))


def apply_full_twists(w: CurveWord, cid: int, k: int) -> CurveWord:
    idx = w.crossings(cid)
    if not idx:
        raise NoCrossing(f"word does not cross cuff {cid}")
    steps = list(w.steps)
    for j in idx:
        steps[j] = replace(steps[j], winding=steps[j].winding + int(k))
    return CurveWord(tuple(steps))


def crossing_cosines(s: PantsSurface, w: CurveWord, cid: int) -> list[float]:
    """cos of the crossing angle at every crossing of ``cid``, in word order.

    The holonomy is read starting at the crossing, where the moving frame
    faces across the cuff; turning that frame left puts the cuff lift on the
    y-axis with the left-twist direction pointing to oo.
    """
    idx = w.crossings(cid)
    if not idx:
        raise NoCrossing(f"word does not cross cuff {cid}")
    turn = HALF_TURN_LEFT
    out = []
    for k in idx:
        h = turn.inverse() @ holonomy(s, w, start=k) @ turn
        rep, att = h.fixed_points()
        out.append(endpoint_cosine(rep, att))
    return out


def crossing_angle(s: PantsSurface, w: CurveWord, cid: int, occurrence: int = 0) -> float:
    validate(w, s.graph)
    cosines = crossing_cosines(s, w, cid)
    if not 0 <= occurrence < len(cosines):
        raise NoCrossing(f"word crosses cuff {cid} {len(cosines)} times; "
                         f"occurrence {occurrence} does not exist")
    return math.acos(max(-1.0, min(1.0, cosines[occurrence])))


def random_word(graph: PantsGraph, rng: random.Random, n_cross: int = 4,
                max_winding: int = 2) -> CurveWord:
    """A closed walk through interior cuffs with random windings.

    The walk takes ``n_cross`` random crossings and then the shortest way
    back to its starting pants.
    """
    interior = [c for c in graph.cuffs if c.interior]
    if not interior:
        raise BadPath("graph has no interior cuffs to cross")
    adj: dict[int, list[tuple[int, int, int, int]]] = {p: [] for p in graph.pants}
    for c in interior:
        (p, a), (q, b) = c.ends
        adj[p].append((c.id, a, q, b))
        adj[q].append((c.id, b, p, a))
    start = rng.choice(interior).ends[0][0]
    moves = []  # (cuff, slot_out, pants_in, slot_in)
    here = start
    for _ in range(n_cross):
        mv = rng.choice(adj[here])
        moves.append(mv)
        here = mv[2]
    moves.extend(_path_home(adj, here, start))
    if not moves:
        raise BadPath("walk did not leave the starting pants")
    steps: list[Step] = []
    arrive_slot = moves[-1][3]
    pants = start
    for cid, slot_out, nxt, slot_in in moves:
        backward = arrive_slot == slot_out and rng.random() < 0.5
        steps.append(Traverse(pants, arrive_slot, slot_out, backward))
        steps.append(Cross(cid, rng.randint(-max_winding, max_winding)))
        pants, arrive_slot = nxt, slot_in
    return CurveWord(tuple(steps))


def _path_home(adj, src, dst):
    if src == dst:
        return []
    prev = {src: None}
    queue = [src]
    while queue:
        nxt_queue = []
        for p in queue:
            for mv in adj[p]:
                q = mv[2]
                if q not in prev:
                    prev[q] = (p, mv)
                    nxt_queue.append(q)
        queue = nxt_queue
    path = []
    node = dst
    while prev[node] is not None:
        p, mv = prev[node]
        path.append(mv)
        node = p
    return path[::-1]
