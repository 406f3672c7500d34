import math

import numpy as np
import pytest
from hypothesis import given

from conftest import graph_names, seeds, surface_from
from pantsfn.curves import CurveWord, beta_curve
from pantsfn.errors import GraphMismatch, ValidationError
from pantsfn.families import chain_graph, genus_two_graph
from pantsfn.pants_surface import build_base
from pantsfn.spectrum import CurveFamily, cuff_family, default_family, dls_estimate, wolpert_check


def perturbed(s, seed, scale=0.3):
    rng = np.random.default_rng(seed + 1)
    lengths = {c.id: s.length(c.id) * math.exp(rng.uniform(-scale, scale)) for c in s.graph.cuffs}
    twists = {c.id: s.twist(c.id) + rng.uniform(-scale, scale) for c in s.graph.cuffs if c.interior}
    return s.replace(lengths=lengths, twists=twists)


def test_identity_is_zero(chain4):
    rep = dls_estimate(chain4, chain4, default_family(chain4, [1]))
    assert rep.dls_estimate == 0.0
    assert all(r.abslogratio == 0.0 for r in rep.rows)


def test_single_cuff_scaled(chain4):
    Y = chain4.replace(lengths={2: math.e ** 2 * chain4.length(2)})
    fam = CurveFamily(("cuff:2",), (CurveWord.cuff_curve(2),))
    assert dls_estimate(chain4, Y, fam).dls_estimate == pytest.approx(1.0)


def test_default_family_counts(genus2):
    assert len(default_family(genus2, [0])) == 6
    assert len(default_family(genus2, [])) == 6
    assert len(default_family(genus2, [1, 2])) == 6 + 3 * 4
    assert len(default_family(genus2, [], eps0=0.5)) == 6 + 3 * 2


def test_mismatch():
    a = build_base(chain_graph(2), [1.0] * 5, 1.0)
    b = build_base(genus_two_graph(), [1.0] * 3, 1.0)
    with pytest.raises(GraphMismatch):
        dls_estimate(a, b, cuff_family(a))
    with pytest.raises(ValidationError):
        CurveFamily((), ())


def test_wolpert(chain4):
    fam = default_family(chain4, [1])
    assert wolpert_check(chain4, chain4, 1.0, fam).holds
    Y = chain4.replace(lengths={1: math.e ** 2 * chain4.length(1)})
    res = wolpert_check(chain4, Y, math.e, fam)
    assert not res.holds and res.worst_label == "cuff:1"
    with pytest.raises(ValidationError):
        wolpert_check(chain4, Y, 0.5, fam)


@given(graph_names, seeds)
def test_wolpert_at_estimate(name, seed):
    X = surface_from(name, seed, lo=0.05)
    Y = perturbed(X, seed)
    fam = default_family(X, [1])
    d = dls_estimate(X, Y, fam).dls_estimate
    assert wolpert_check(X, Y, math.exp(2 * d), fam).holds


@given(graph_names, seeds)
def test_twist_only_changes_hit_beta_curves(name, seed):
    X = surface_from(name, seed, lo=0.05)
    rng = np.random.default_rng(seed)
    Y = X.replace(twists={c: X.twist(c) + rng.uniform(0.1, 1.0) for c in X.graph.interior_cuffs})
    rep = dls_estimate(X, Y, default_family(X, [1]))
    assert rep.dls_estimate > 0
    assert not rep.argmax_label.startswith("cuff")


def test_csv_and_summary(chain4):
    Y = chain4.replace(twists={1: 0.4})
    rep = dls_estimate(chain4, Y, default_family(chain4))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "label,lX,lY,abslogratio"
    assert len(lines) == 1 + len(rep.rows)
    assert rep.summary()["family_size"] == len(default_family(chain4))


def test_windings_follow_reference_twist():
    # on the reference surface the family's beta curve sees only the reduced twist
    g = genus_two_graph()
    X = build_base(g, [0.5] * 3, 0.5)
    far = X.replace(twists={0: 0.2 + 3 * 0.5})
    near = X.replace(twists={0: 0.2})
    L_far = [r.lX for r in dls_estimate(far, far, default_family(far)).rows]
    L_near = [r.lX for r in dls_estimate(near, near, default_family(near)).rows]
    assert L_far == pytest.approx(L_near, rel=1e-9)
