import random

import pytest

from dadelab.biset import induction_biset
from dadelab.builder import build_poset
from dadelab.cfun import jnd
from dadelab.demos import c3_nontight_poset
from dadelab.grp import GroupError, build_group
from dadelab.gposet import (discrete_poset, empty_poset, flag_complex, jn_U, join, point_poset,
                            union)
from dadelab.gset import fixed_points, omega, transitive_gset
from dadelab.moore import (ChainComplexFp, NotMooreError, analyze, core, dim_function,
                           dimsum_check, reduced_betti)
from dadelab.xalg import rank_mod_p_sparse
from oracles import random_gset


def dense_rank_mod_p(cols, nrows, p):
    """Plain row reduction of the dense matrix built from sparse columns."""
    M = [[col.get(r, 0) % p for col in cols] for r in range(nrows)]
    rank = 0
    ncols = len(cols)
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        for i in range(nrows):
            if i != rank and M[i][c]:
                t = M[i][c] * inv
                M[i] = [(a - t * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def betti_oracle(P, p):
    """Reduced Betti numbers from dense ranks of the unreduced augmented complex."""
    C = ChainComplexFp(flag_complex(P), p)
    ranks = [dense_rank_mod_p(cols, C.dims[d], p) for d, cols in enumerate(C.boundary)] + [0]
    out = [C.dims[0] - ranks[0]] if C.boundary else [1]
    for d in range(len(C.boundary)):
        out.append(C.dims[d + 1] - ranks[d] - ranks[d + 1])
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def free(G):
    return discrete_poset(transitive_gset(G, G.trivial_bits))


def c3():
    return build_group("C3")


EXPRS = ["gset(G/1)", "join(gset(G/1), gset(G/1))", "susp(susp(point))", "cone(gset(G/1))",
         "union(gset(G/1), susp(point))", "join(point(3), gset(G/1))", "point", "empty",
         "union(cone(gset(G/1)), point(2))"]


def test_betti_examples():
    G = c3()
    assert reduced_betti(empty_poset(G), 3) == [1]
    assert reduced_betti(point_poset(G), 3) == [0]
    J = join(free(G), free(G))
    assert reduced_betti(J, 3) == [0, 0, 4]
    assert reduced_betti(J, 3, reduce=False) == [0, 0, 4]
    assert reduced_betti(discrete_poset(transitive_gset(G, G.trivial_bits).disjoint_union(
        transitive_gset(G, G.trivial_bits))), 3) == [0, 5]


def test_boundary_rank_of_join():
    G = c3()
    C = ChainComplexFp(flag_complex(join(free(G), free(G))), 3)
    assert C.dims == [1, 15, 18]
    assert rank_mod_p_sparse(C.boundary[1], 3) == 14 == dense_rank_mod_p(C.boundary[1], 15, 3)
    assert C.check_dd()


@pytest.mark.parametrize("spec", ["C3", "C2", "C5", "C9"])
@pytest.mark.parametrize("expr", EXPRS)
def test_betti_against_dense_oracle_and_core(spec, expr):
    G = build_group(spec)
    P = build_poset(expr, G)
    p = G.prime
    assert ChainComplexFp(flag_complex(P), p).check_dd()
    expected = betti_oracle(P, p)
    assert reduced_betti(P, p, reduce=False) == expected
    assert reduced_betti(P, p) == expected
    assert reduced_betti(core(P), p, reduce=False) == expected


def convolve_join(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


@pytest.mark.parametrize("spec", ["C3", "C2", "C4", "C5"])
def test_kunneth_for_joins(spec):
    G = build_group(spec)
    posets = [build_poset(e, G) for e in ["gset(G/1)", "point(2)", "susp(point(2))", "empty",
                                           "point", "union(gset(G/1), point)"]]
    for X in posets:
        for Y in posets:
            bx, by = reduced_betti(X, G.prime), reduced_betti(Y, G.prime)
            assert reduced_betti(join(X, Y), G.prime) == convolve_join(bx, by)


def test_analyze_examples():
    G = c3()
    two = transitive_gset(G, G.trivial_bits).disjoint_union(transitive_gset(G, G.trivial_bits))
    r = analyze(discrete_poset(two))
    assert r.is_moore and r.is_capped and r.is_tight and r.is_full
    assert [e.n for e in r.entries] == [0, -1]
    assert r.dim_function.values == (1, 0)
    J = join(free(G), free(G))
    r = analyze(J)
    assert (r.is_moore, r.is_tight, r.is_full, r.is_capped) == (True, True, True, True)
    assert dim_function(r).values == (2, 0)
    assert [len(c.orbits()) for c in r.cells] == [5, 6]
    r = analyze(c3_nontight_poset())
    assert r.is_moore and not r.is_tight and r.is_capped
    assert r.dim_function.values == (2, 1)
    assert [e.dim for e in r.entries] == [1, 1] and r.entries[1].n == 0


def test_acyclic_and_empty_conventions():
    G = c3()
    r = analyze(point_poset(G))
    assert r.is_moore and r.acyclic_classes == [0, 1] and not r.is_capped
    assert r.dim_function.values == (0, 0)
    r = analyze(empty_poset(G))
    assert r.is_moore and r.is_capped and r.dim_function.values == (0, 0)
    assert [e.dim for e in r.entries] == [-1, -1] and r.is_tight


def test_not_moore():
    G = build_group("C3")
    circle = build_poset("susp(point(2))", G)
    assert circle.size == 8
    X = union(free(G), circle)
    r = analyze(X)
    assert not r.is_moore and r.dim_function is None
    with pytest.raises(NotMooreError):
        dim_function(r)
    with pytest.raises(GroupError):
        analyze(X, p=2)


@pytest.mark.parametrize("spec", ["C2", "C4", "C3", "C9", "D8", "Q8", "C3xC3", "C2xC2"])
def test_dim_of_discrete_gset_is_omega(spec):
    G = build_group(spec)
    rng = random.Random(spec)
    for _ in range(8):
        X = random_gset(G, rng)
        if len(fixed_points(X, G.all_bits)) == 1:
            continue
        r = analyze(discrete_poset(X))
        assert r.is_moore and r.dim_function == omega(X)
        assert dimsum_check(discrete_poset(X))["status"] == "pass"


def test_dimsum_examples():
    G = c3()
    d = dimsum_check(join(free(G), free(G)))
    assert d == {"status": "pass", "dim": [2, 0], "sum_of_omegas": [2, 0]}
    assert dimsum_check(c3_nontight_poset())["status"] == "inapplicable"
    C9 = build_group("C9")
    C3 = next(s for s in C9.lattice.reps if bin(s).count("1") == 3)
    U = induction_biset(C9, C3)
    J = jn_U(U, free(U.K))
    r = analyze(J)
    assert r.dim_function.values == (3, 0, 0)
    assert dimsum_check(J, report=r)["status"] == "pass"


def test_jn_point_homology():
    G = c3()
    U = induction_biset(G, G.trivial_bits)
    assert reduced_betti(jn_U(U, point_poset(U.K)), 3) == [0]
    assert reduced_betti(jn_U(U, point_poset(U.K, 2)), 3) == [0, 0, 0, 1]
    # total homology dimension is raised to the power [H:K]
    assert reduced_betti(jn_U(U, point_poset(U.K, 3)), 3) == [0, 0, 0, 8]


@pytest.mark.parametrize("spec,order", [("C9", 3), ("D8", 4), ("C3xC3", 3), ("Q8", 4)])
def test_dim_functoriality(spec, order):
    G = build_group(spec)
    for K in [s for s in G.lattice.reps if bin(s).count("1") == order]:
        U = induction_biset(G, K)
        for X in (free(U.K), point_poset(U.K, 2)):
            rx = analyze(X, cells=False)
            rj = analyze(jn_U(U, X), cells=False)
            assert rj.is_moore
            assert rj.dim_function == jnd(U, rx.dim_function)
