import random

import pytest
from hypothesis import given, settings, strategies as st

from dadelab.biset import compose, identity_biset, induction_biset
from dadelab.cfun import (SuperClassFunction, from_omega_coordinates, idempotent_basis, jnd,
                          jnd_direct, omega_basis, omega_transitive, to_omega_coordinates)
from dadelab.grp import DEFAULT_CATALOG, GroupError, build_group, members
from dadelab.gset import omega, transitive_gset
from oracles import biset_with_left, biset_with_right


def sub_of_order(G, n):
    return next(s for s in G.lattice.reps if bin(s).count("1") == n)


def jnd_induction_oracle(H, K, f):
    """(Jnd f)(L) = sum over double cosets L h K of f(K cap h^-1 L h), by set enumeration."""
    Kg, emb = H.subgroup_group(K)
    pos = {x: i for i, x in enumerate(emb)}
    out = []
    for L in H.lattice.reps:
        seen = set()
        total = 0
        for h in range(H.order):
            if h in seen:
                continue
            dc = {H.mult[H.mult[l][h]][k] for l in members(L) for k in members(K)}
            seen |= dc
            hinv = H.inv[h]
            conj = {H.mult[H.mult[hinv][l]][h] for l in members(L)}
            inter = [pos[k] for k in members(K) if k in conj]
            total += f.values[Kg.lattice.class_index(sum(1 << i for i in inter))]
        out.append(total)
    return out


def test_bases_small():
    C3 = build_group("C3")
    assert [e.values for e in idempotent_basis(C3)] == [(1, 0), (0, 1)]
    assert [w.values for w in omega_basis(C3)] == [(1, 0), (1, 1)]
    D8 = build_group("D8")
    assert [list(e.values) for e in idempotent_basis(D8)] == [
        [int(i == j) for j in range(8)] for i in range(8)]


def test_omega_coordinates_examples():
    C3 = build_group("C3")
    assert to_omega_coordinates(SuperClassFunction(C3, [0, 1])) == [-1, 1]
    assert to_omega_coordinates(SuperClassFunction(C3, [3, 1])) == [2, 1]
    E = build_group("C3xC3")
    eG = idempotent_basis(E)[-1]
    assert to_omega_coordinates(eG) == [3, -1, -1, -1, -1, 1]
    for H in range(len(E.lattice)):
        assert to_omega_coordinates(omega_transitive(E, H)) == [int(i == H) for i in range(6)]


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
def test_omega_basis_unitriangular(spec):
    G = build_group(spec)
    k = len(G.lattice)
    M = [w.values for w in omega_basis(G)]
    for i in range(k):
        assert M[i][i] == 1
        assert all(M[i][j] == 0 for j in range(i + 1, k))
        assert omega_transitive(G, i) == omega(transitive_gset(G, G.lattice.reps[i]))


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
def test_round_trip(spec):
    G = build_group(spec)
    k = len(G.lattice)
    rng = random.Random(spec)
    for _ in range(100):
        v = [rng.randint(-50, 50) for _ in range(k)]
        f = SuperClassFunction(G, v)
        assert from_omega_coordinates(G, to_omega_coordinates(f)) == f
        assert to_omega_coordinates(from_omega_coordinates(G, v)) == v


def test_jnd_examples():
    C9 = build_group("C9")
    C3 = sub_of_order(C9, 3)
    U = induction_biset(C9, C3)
    w = omega_transitive(U.K, 0)
    assert jnd(U, w).values == (3, 0, 0)
    C3g = build_group("C3")
    U1 = induction_biset(C3g, C3g.trivial_bits)
    pt = omega_transitive(U1.K, 0)
    assert jnd(U1, pt).values == (3, 1)
    f = SuperClassFunction(C9, [4, -2, 7])
    assert jnd(identity_biset(C9), f) == f


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
def test_jnd_induction_against_double_cosets(spec):
    G = build_group(spec)
    rng = random.Random(spec)
    for K in G.lattice.reps:
        U = induction_biset(G, K)
        f = SuperClassFunction(U.K, [rng.randint(-5, 5) for _ in range(len(U.K.lattice))])
        assert list(jnd(U, f).values) == jnd_induction_oracle(G, K, f)


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
def test_jnd_against_direct_evaluation(spec):
    G = build_group(spec)
    rng = random.Random("direct" + spec)
    for _ in range(20):
        U = biset_with_left(rng, G)
        f = SuperClassFunction(U.K, [rng.randint(-5, 5) for _ in range(len(U.K.lattice))])
        assert jnd(U, f) == jnd_direct(U, f)


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
def test_functoriality(spec):
    M = build_group(spec)
    rng = random.Random("functor" + spec)
    for _ in range(8):
        U = biset_with_right(rng, M)
        V = biset_with_left(rng, M)
        f = SuperClassFunction(V.K, [rng.randint(-4, 4) for _ in range(len(V.K.lattice))])
        assert jnd(compose(U, V), f) == jnd(U, jnd(V, f))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["D8", "Q8", "C9", "C3xC3"]), st.data())
def test_additivity(spec, data):
    G = build_group(spec)
    reps = G.lattice.reps
    U = induction_biset(G, data.draw(st.sampled_from(reps)))
    U2 = induction_biset(G, data.draw(st.sampled_from(reps)))
    if U2.K.mult != U.K.mult:
        U2 = U
    f = SuperClassFunction(U.K, data.draw(st.lists(st.integers(-9, 9), min_size=len(U.K.lattice),
                                                   max_size=len(U.K.lattice))))
    W = U.disjoint_union(U2)
    assert jnd(W, f) == jnd(U, f) + jnd(U2, f)


def test_group_mismatch():
    C9 = build_group("C9")
    U = induction_biset(C9, sub_of_order(C9, 3))
    with pytest.raises(GroupError):
        jnd(U, SuperClassFunction(build_group("D8"), [0] * 8))
    with pytest.raises(GroupError):
        SuperClassFunction(C9, [1, 2])
