"""Marked surfaces glued from pairs of pants.

Geometry of one pair of pants
-----------------------------
Slots 0, 1, 2 carry cuffs of lengths l0, l1, l2. The seams cut the pants into
a front and a back right-angled hexagon. On the cuff in slot ``i`` we use an
arclength coordinate ``s`` in the boundary orientation (pants on the left),
with ``s = 0`` at the foot of the seam towards slot ``i+1`` and ``s = -l_i/2``
at the foot of the seam towards slot ``i-1``; the front hexagon holds the
a-side ``[-l_i/2, 0]``.

Every pants-local quantity is expressed through moving frames (see
:mod:`pantsfn.hyp_core`). ``frames[i]`` sits at ``s = 0`` on slot ``i`` and
points into the pants. A traverse block takes that inward frame to the
outward frame at ``s = 0`` of the exit slot; a cross block takes an outward
frame on one side of a cuff to the inward frame on the other side. A closed
curve word is the cyclic product of its blocks and its holonomy trace gives
the geodesic length.

Gluing and twists
-----------------
A positive twist is a left twist: crossing the cuff from either side, one
turns left and walks ``t`` before continuing. The zero-twist position matches
the reference seam feet of both sides: the seam towards ``slot+1`` for cuffs
between different pants, the seam joining the two glued slots for a pants
glued to itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadGraph, BadPath, BoundaryCuff, LengthOutOfRange, NumericalDegeneration
from .hyp_core import (
    ABOUT_FACE,
    HALF_TURN_LEFT,
    HALF_TURN_RIGHT,
    Isometry,
    hexagon_opposite,
    pentagon_side,
    sidestep,
    translate,
)


@dataclass(frozen=True)
class Cuff:
    id: int
    ends: tuple[tuple[int, int], ...]

    @property
    def interior(self) -> bool:
        return len(self.ends) == 2

    @property
    def self_glued(self) -> bool:
        return self.interior and self.ends[0][0] == self.ends[1][0]


@dataclass(frozen=True)
class PantsGraph:
    pants: tuple[int, ...]
    cuffs: tuple[Cuff, ...]
    slot_map: dict = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pants_ids = set()
        for p in self.pants:
            if p in pants_ids:
                raise BadGraph(f"duplicate pants id {p}")
            pants_ids.add(p)
        if not pants_ids:
            raise BadGraph("graph has no pants")
        slot_map: dict[tuple[int, int], int] = {}
        index: dict[int, int] = {}
        for k, cuff in enumerate(self.cuffs):
            if cuff.id in index:
                raise BadGraph(f"duplicate cuff id {cuff.id}")
            index[cuff.id] = k
            if len(cuff.ends) not in (1, 2):
                raise BadGraph(f"cuff {cuff.id}: needs one or two ends, got {len(cuff.ends)}")
            for p, slot in cuff.ends:
                if p not in pants_ids:
                    raise BadGraph(f"cuff {cuff.id}: unknown pants {p}")
                if slot not in (0, 1, 2):
                    raise BadGraph(f"cuff {cuff.id}: slot {slot} of pants {p} out of range")
                if (p, slot) in slot_map:
                    raise BadGraph(f"cuff {cuff.id}: slot {slot} of pants {p} already used "
                                   f"by cuff {slot_map[(p, slot)]}")
                slot_map[(p, slot)] = cuff.id
        for p in self.pants:
            for slot in range(3):
                if (p, slot) not in slot_map:
                    raise BadGraph(f"pants {p}: slot {slot} has no cuff")
        object.__setattr__(self, "slot_map", slot_map)
        object.__setattr__(self, "index", index)
        self._check_connected()

    def _check_connected(self):
        adj = {p: set() for p in self.pants}
        for cuff in self.cuffs:
            if cuff.interior:
                (p, _), (q, _) = cuff.ends
                adj[p].add(q)
                adj[q].add(p)
        seen = {self.pants[0]}
        stack = [self.pants[0]]
        while stack:
            for q in adj[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != len(self.pants):
            missing = sorted(set(self.pants) - seen)
            raise BadGraph(f"graph is disconnected; pants {missing} unreachable from {self.pants[0]}")

    def cuff(self, cid: int) -> Cuff:
        try:
            return self.cuffs[self.index[cid]]
        except KeyError:
            raise BadPath(f"unknown cuff {cid}") from None

    def other_end(self, cid: int, pants: int, slot: int) -> tuple[int, int]:
        cuff = self.cuff(cid)
        if not cuff.interior:
            raise BoundaryCuff(f"cuff {cid} is a boundary cuff")
        e0, e1 = cuff.ends
        if e0 == (pants, slot):
            return e1
        if e1 == (pants, slot):
            return e0
        raise BadPath(f"cuff {cid} is not attached to slot {slot} of pants {pants}")

    @property
    def interior_cuffs(self) -> list[int]:
        return [c.id for c in self.cuffs if c.interior]

    def relabel(self, cuff_perm: dict[int, int]) -> "PantsGraph":
        """Same topology with cuff ids renamed through ``cuff_perm``."""
        cuffs = tuple(Cuff(cuff_perm[c.id], c.ends) for c in self.cuffs)
        return PantsGraph(self.pants, cuffs)


class PantsGeometry:
    """Seams, self-perpendiculars and frame blocks of one hyperbolic pants."""

    __slots__ = ("lengths", "seams", "self_perps", "feet", "frames", "blocks")

    def __init__(self, lengths: Sequence[float]):
        l = tuple(float(x) for x in lengths)
        h = [0.5 * x for x in l]
        self.lengths = l
        # seams[i] joins slot i to slot i+1 and faces the half-cuff of slot i+2
        self.seams = tuple(hexagon_opposite(h[i], h[(i + 1) % 3], h[(i + 2) % 3])
                           for i in range(3))
        # self-perpendicular on slot i: two right-angled pentagons glued along it
        self.self_perps = tuple(2.0 * pentagon_side(self.seams[i], h[(i + 1) % 3])
                                for i in range(3))
        # its feet sit at s = -foot (front) and s = +foot (back)
        self.feet = tuple(math.asinh(math.cosh(h[(i + 1) % 3]) / math.sinh(0.5 * self.self_perps[i]))
                          for i in range(3))

        # Going once around the hexagon closes up (to -I), so the frame two
        # corners ahead is the inverse of the corner behind. Building every
        # block from a single corner avoids cancelling the huge entries of
        # long seams against each other.
        corners = [self._corner(i) for i in range(3)]
        self.frames = (Isometry.identity(), corners[0], corners[2].inverse())

        blocks = {}
        for a in range(3):
            x = self.feet[a]
            blocks[a, a] = sidestep(x) @ translate(self.self_perps[a]) @ sidestep(-x)
            # the same arc entered from its other foot
            blocks[a, a, True] = sidestep(-x) @ translate(self.self_perps[a]) @ sidestep(x)
            blocks[a, (a + 1) % 3] = corners[a] @ ABOUT_FACE
            blocks[a, (a + 2) % 3] = corners[(a + 2) % 3].inverse() @ ABOUT_FACE
        self.blocks = blocks

    def _corner(self, i: int) -> Isometry:
        j = (i + 1) % 3
        return translate(self.seams[i]) @ HALF_TURN_LEFT @ translate(0.5 * self.lengths[j]) @ HALF_TURN_LEFT

    def perp(self, a: int, b: int) -> float:
        if a == b:
            return self.self_perps[a]
        if (a + 1) % 3 == b:
            return self.seams[a]
        return self.seams[b]

    def cuff_loop(self, slot: int) -> Isometry:
        """Holonomy of the boundary cuff in ``slot``, in pants-local coordinates."""
        along = self.frames[slot] @ HALF_TURN_RIGHT
        return along @ translate(self.lengths[slot]) @ along.inverse()


@dataclass(frozen=True)
class PantsSurface:
    """A pants graph with Fenchel-Nielsen coordinates.

    ``lengths`` and ``twists`` follow ``graph.cuffs`` order; boundary cuffs
    carry a twist of 0 that is never used.
    """

    graph: PantsGraph
    lengths: tuple[float, ...]
    twists: tuple[float, ...]
    M0: float
    geometry: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.graph.cuffs)
        if len(self.lengths) != n or len(self.twists) != n:
            raise BadGraph(f"expected {n} lengths and twists, got "
                           f"{len(self.lengths)} and {len(self.twists)}")
        for cuff, l, t in zip(self.graph.cuffs, self.lengths, self.twists):
            if not (l > 0 and math.isfinite(l)):
                raise LengthOutOfRange(f"cuff {cuff.id}: length {l!r} must be positive and finite")
            if not math.isfinite(t):
                raise LengthOutOfRange(f"cuff {cuff.id}: twist {t!r} must be finite")
        slot_len = {}
        for cuff, l in zip(self.graph.cuffs, self.lengths):
            for end in cuff.ends:
                slot_len[end] = l
        geometry = {}
        for p in self.graph.pants:
            try:
                geometry[p] = PantsGeometry([slot_len[p, s] for s in range(3)])
            except (OverflowError, ZeroDivisionError) as exc:
                raise NumericalDegeneration(f"pants {p}: seam lengths out of float range ({exc})") from None
        object.__setattr__(self, "geometry", geometry)

    def length(self, cid: int) -> float:
        return self.lengths[self.graph.index[cid]]

    def twist(self, cid: int) -> float:
        return self.twists[self.graph.index[cid]]

    def replace(self, lengths=None, twists=None, M0=None) -> "PantsSurface":
        """New surface on the same graph; ``lengths``/``twists`` are dicts by cuff id."""
        ls = list(self.lengths)
        ts = list(self.twists)
        for cid, v in (lengths or {}).items():
            ls[self.graph.index[cid]] = float(v)
        for cid, v in (twists or {}).items():
            if not self.graph.cuff(cid).interior:
                raise BoundaryCuff(f"cuff {cid} is a boundary cuff and carries no twist")
            ts[self.graph.index[cid]] = float(v)
        return PantsSurface(self.graph, tuple(ls), tuple(ts), self.M0 if M0 is None else M0)

    def origin_shift(self, cid: int) -> float:
        """Offset between the local ``s = 0`` points and the twist origin."""
        cuff = self.graph.cuff(cid)
        return -0.5 * self.length(cid) if cuff.self_glued else 0.0

    def cross_block(self, cid: int, winding: int) -> Isometry:
        cuff = self.graph.cuff(cid)
        if not cuff.interior:
            raise BadPath(f"cuff {cid} is a boundary cuff and cannot be crossed")
        l = self.length(cid)
        return sidestep(self.origin_shift(cid) + self.twist(cid) + winding * l)

    def traverse_block(self, pants: int, slot_in: int, slot_out: int,
                       backward: bool = False) -> Isometry:
        if backward:
            return self.geometry[pants].blocks[slot_in, slot_out, True]
        return self.geometry[pants].blocks[slot_in, slot_out]


def _check_graph(graph: PantsGraph, lengths: Iterable[float]):
    if len(list(lengths)) != len(graph.cuffs):
        raise BadGraph("lengths do not match the cuffs of the graph")


def normalize_twist(t: float, l: float) -> float:
    r = math.fmod(t, l)
    if r < 0:
        r += l
    return 0.0 if r >= l else r


def build_base(graph: PantsGraph, lengths: Sequence[float], M0: float,
               twists: Sequence[float] | None = None) -> PantsSurface:
    """Base surface with cuffs bounded by ``M0`` and twists reduced into [0, l)."""
    _check_graph(graph, lengths)
    for cuff, l in zip(graph.cuffs, lengths):
        if not (0 < l <= M0):
            raise LengthOutOfRange(f"cuff {cuff.id}: length {l!r} outside (0, {M0}]")
    if twists is None:
        twists = [0.0] * len(graph.cuffs)
    ts = tuple(normalize_twist(t, l) if c.interior else 0.0
               for c, t, l in zip(graph.cuffs, twists, lengths))
    return PantsSurface(graph, tuple(float(l) for l in lengths), ts, float(M0))


def perp_length(s: PantsSurface, pants: int, slot_a: int, slot_b: int) -> float:
    if pants not in s.geometry:
        raise BadPath(f"unknown pants {pants}")
    if slot_a not in (0, 1, 2) or slot_b not in (0, 1, 2):
        raise BadPath(f"pants {pants}: slots must be 0, 1 or 2")
    return s.geometry[pants].perp(slot_a, slot_b)


# --- spec files -------------------------------------------------------------

def surface_to_dict(s: PantsSurface) -> dict:
    cuffs = []
    for c, l, t in zip(s.graph.cuffs, s.lengths, s.twists):
        entry = {"id": c.id, "ends": [list(e) for e in c.ends], "length": l}
        if c.interior:
            entry["twist"] = t
        cuffs.append(entry)
    return {"M0": s.M0, "pants": [{"id": p} for p in s.graph.pants], "cuffs": cuffs}


def surface_from_dict(data: dict) -> PantsSurface:
    if not isinstance(data, dict):
        raise BadGraph("surface spec must be a JSON object")
    if "M0" not in data:
        raise BadGraph("surface spec: missing 'M0'")
    try:
        pants = tuple(int(p["id"]) for p in data.get("pants", []))
    except (KeyError, TypeError, ValueError):
        raise BadGraph("surface spec: every pants needs an integer 'id'") from None
    cuffs, lengths, twists = [], [], []
    for k, entry in enumerate(data.get("cuffs", [])):
        cid = entry.get("id", f"#{k}")
        if "id" not in entry:
            raise BadGraph(f"cuff {cid}: missing 'id'")
        if "length" not in entry:
            raise LengthOutOfRange(f"cuff {cid}: missing 'length'")
        try:
            ends = tuple((int(p), int(slot)) for p, slot in entry["ends"])
        except (KeyError, TypeError, ValueError):
            raise BadGraph(f"cuff {cid}: 'ends' must be a list of [pantsId, slot] pairs") from None
        cuffs.append(Cuff(int(cid), ends))
        lengths.append(float(entry["length"]))
        if len(ends) == 1 and entry.get("twist") not in (None, 0, 0.0):
            raise BoundaryCuff(f"cuff {cid}: boundary cuffs carry no twist")
        twists.append(float(entry.get("twist", 0.0) or 0.0))
    graph = PantsGraph(pants, tuple(cuffs))
    return PantsSurface(graph, tuple(lengths), tuple(twists), float(data["M0"]))


def save_surface(s: PantsSurface, path) -> None:
    with open(path, "w") as fh:
        json.dump(surface_to_dict(s), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_surface(path) -> PantsSurface:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadGraph(f"{path}: not valid JSON ({exc})") from None
    return surface_from_dict(data)
