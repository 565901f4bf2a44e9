"""The two worked examples: a non-tight Moore C_3-poset, and a wedge of two
suspensions over C_3 x C_3 whose fixed sets are not homologically concentrated."""
from __future__ import annotations

from .dade import hom_of_moore, tight_formula
from .grp import build_group, members
from .gposet import GPoset, poset_from_relations
from .gset import transitive_gset
from .moore import analyze, reduced_betti


def _gset_action_with_fixed(X, extra: int):
    """Action table of X extended by ``extra`` fixed points appended at the end."""
    n = X.size
    return [list(row) + list(range(n, n + extra)) for row in X.action]


def c3_nontight_poset() -> GPoset:
    """Suspension of the free C_3-orbit with a fixed edge m < N attached at the north pole."""
    G = build_group("C3")
    X = transitive_gset(G, G.trivial_bits)
    names = ["a", "b", "c", "N", "S", "m"]
    less = [(x, 3) for x in range(3)] + [(x, 4) for x in range(3)] + [(5, 3)]
    return poset_from_relations(G, names, less, _gset_action_with_fixed(X, 3))


def c3xc3_wedge_poset():
    """Sigma(G/H1) and Sigma(G/H2) glued at a shared fixed north pole, H1 != H2 of order 3."""
    G = build_group("C3xC3")
    lat = G.lattice
    order3 = [i for i in range(len(lat)) if lat.order_of(i) == 3]
    h1, h2 = order3[0], order3[1]
    X1 = transitive_gset(G, lat.reps[h1])
    X2 = transitive_gset(G, lat.reps[h2])
    # points 0-2: G/H1, 3-5: G/H2, 6: N, 7: S1, 8: S2
    names = ["x0", "x1", "x2", "y0", "y1", "y2", "N", "S1", "S2"]
    less = [(i, 6) for i in range(6)] + [(i, 7) for i in range(3)] + [(i, 8) for i in range(3, 6)]
    action = [list(a) + [3 + y for y in b] + [6, 7, 8] for a, b in zip(X1.action, X2.action)]
    return poset_from_relations(G, names, less, action), (h1, h2)


def demo_c3_nontight() -> dict:
    X = c3_nontight_poset()
    rep = analyze(X)
    actual = hom_of_moore(X, report=rep)
    summed = tight_formula(X, report=rep, demo=True)
    mismatch = actual != summed
    return {
        "demo": "c3-nontight",
        "group": "C3",
        "poset": X.to_json(),
        "report": rep.to_json(),
        "dim_function": list(rep.dim_function.values),
        "tight_formula_sum": summed.to_json(),
        "homology_class": actual.to_json(),
        "mismatch": mismatch,
        "status": "pass" if mismatch and not rep.is_tight and summed.is_zero()
        and not actual.is_zero() else "fail",
        "note": "X^G is one dimensional while its homology sits in degree 0, so the "
                "complex is not tight: the sum of Omega_{X_i} is zero but the homology "
                "class is the nonzero element Omega_{G/1}.",
    }


def demo_c3xc3_wedge() -> dict:
    X, (h1, h2) = c3xc3_wedge_poset()
    G = X.group
    rep = analyze(X)
    whole = reduced_betti(X, 3)
    rows = [e.to_json() for e in rep.entries]
    concentrated = [e.n is not None for e in rep.entries]
    return {
        "demo": "c3xc3-wedge",
        "group": "C3xC3",
        "H1": {"class": h1, "members": [G.label(x) for x in members(G.lattice.reps[h1])]},
        "H2": {"class": h2, "members": [G.label(x) for x in members(G.lattice.reps[h2])]},
        "poset": X.to_json(),
        "betti_whole_space_from_degree_-1": whole,
        "fixed_point_betti": rows,
        "classes_with_concentrated_homology": concentrated,
        "is_moore": rep.is_moore,
        "status": "pass" if whole == [0, 0, 4] and not rep.is_moore else "fail",
        "note": "The reduced homology of X is 2+2 in degree 1, but the fixed sets at H1 "
                "and H2 carry homology in degrees 0 and 1, so X is not a Moore G-space. "
                "The module-level conclusion about non-endo-permutation homology is "
                "quoted, not re-proved.",
    }


DEMOS = {"c3-nontight": demo_c3_nontight, "c3xc3-wedge": demo_c3xc3_wedge}
