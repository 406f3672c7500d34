"""Finite pants graphs used as truncations of infinite-type surfaces."""

from __future__ import annotations

import math

import numpy as np

from .errors import BadGraph
from .pants_surface import Cuff, PantsGraph, PantsSurface, build_base


def chain_graph(n: int) -> PantsGraph:
    """Pants 0..n-1 in a row; slot 1 of pants i is glued to slot 0 of pants i+1.

    Interior cuffs get ids 0..n-2 in chain order, boundary cuffs follow.
    """
    if n < 1:
        raise BadGraph("a chain needs at least one pants")
    cuffs = [Cuff(i, ((i, 1), (i + 1, 0))) for i in range(n - 1)]
    nxt = n - 1
    cuffs.append(Cuff(nxt, ((0, 0),)))
    nxt += 1
    for i in range(n):
        cuffs.append(Cuff(nxt, ((i, 2),)))
        nxt += 1
    cuffs.append(Cuff(nxt, ((n - 1, 1),)))
    return PantsGraph(tuple(range(n)), tuple(cuffs))


def tree_graph(n: int) -> PantsGraph:
    """Binary tree in breadth-first order: slot 0 faces the parent, slots 1, 2
    the children. Interior cuffs are numbered by child pants (id = child - 1)."""
    if n < 1:
        raise BadGraph("a tree needs at least one pants")
    cuffs = []
    used = set()
    for child in range(1, n):
        parent, side = divmod(child - 1, 2)
        slot = 1 + side
        cuffs.append(Cuff(child - 1, ((parent, slot), (child, 0))))
        used.add((parent, slot))
        used.add((child, 0))
    nxt = n - 1
    for p in range(n):
        for slot in range(3):
            if (p, slot) not in used:
                cuffs.append(Cuff(nxt, ((p, slot),)))
                nxt += 1
    return PantsGraph(tuple(range(n)), tuple(cuffs))


def genus_two_graph() -> PantsGraph:
    """Two pants glued slot-to-slot along three cuffs (closed genus 2)."""
    return PantsGraph((0, 1), tuple(Cuff(i, ((0, i), (1, i))) for i in range(3)))


def one_holed_torus_graph() -> PantsGraph:
    """One pants glued to itself along slots 0 and 1; slot 2 is the boundary."""
    return PantsGraph((0,), (Cuff(0, ((0, 0), (0, 1))), Cuff(1, ((0, 2),))))


GRAPHS = {
    "chain": chain_graph,
    "tree": tree_graph,
    "genus2": lambda n=None: genus_two_graph(),
    "torus": lambda n=None: one_holed_torus_graph(),
}


def log_uniform_lengths(count: int, lo: float, hi: float, rng: np.random.Generator) -> np.ndarray:
    if not 0 < lo <= hi:
        raise ValueError(f"need 0 < lo <= hi, got {lo}, {hi}")
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=count))


def random_surface(graph: PantsGraph, lo: float, hi: float, rng: np.random.Generator,
                   twist_scale: float = 1.0) -> PantsSurface:
    """Base surface with log-uniform cuffs in [lo, hi] and random normalized twists."""
    lengths = log_uniform_lengths(len(graph.cuffs), lo, hi, rng)
    twists = rng.uniform(0.0, 1.0, size=len(graph.cuffs)) * lengths * twist_scale
    return build_base(graph, [float(x) for x in lengths], hi, [float(t) for t in twists])
