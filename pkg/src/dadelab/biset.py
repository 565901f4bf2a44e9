"""Finite (H,K)-bisets with explicit left and right action tables."""
from __future__ import annotations

from collections import Counter

from .grp import FiniteGroup, GroupError, bits_of, members, quotient_group, same_group


class Biset:
    """``left[h][u]`` is h.u and ``right[k][u]`` is u.k."""

    def __init__(self, left_group: FiniteGroup, right_group: FiniteGroup, left, right,
                 name: str = "", check=True):
        self.H = left_group
        self.K = right_group
        self.left = tuple(tuple(r) for r in left)
        self.right = tuple(tuple(r) for r in right)
        self.size = len(self.left[0])
        self.name = name
        if check:
            self.validate()

    def __repr__(self):
        return f"Biset({self.name or '?'}: {self.H!r} x {self.K!r}, size={self.size})"

    def validate(self):
        H, K, L, R, n = self.H, self.K, self.left, self.right, self.size
        if len(L) != H.order or len(R) != K.order:
            raise GroupError("action tables do not match the groups")
        if any(len(r) != n for r in L) or any(len(r) != n for r in R):
            raise GroupError("ragged action table")
        if L[H.identity] != tuple(range(n)) or R[K.identity] != tuple(range(n)):
            raise GroupError("identity does not act trivially")
        for a in range(H.order):
            for b in range(H.order):
                ab = L[H.mult[a][b]]
                if any(L[a][L[b][u]] != ab[u] for u in range(n)):
                    raise GroupError("left action is not an action")
        for a in range(K.order):
            for b in range(K.order):
                ab = R[K.mult[a][b]]
                # (u a) b = u (ab)
                if any(R[b][R[a][u]] != ab[u] for u in range(n)):
                    raise GroupError("right action is not an action")
        # (h u) k = h (u k)
        for h in range(H.order):
            for k in range(K.order):
                if any(R[k][L[h][u]] != L[h][R[k][u]] for u in range(n)):
                    raise GroupError("left and right actions do not commute")

    def opposite(self) -> "Biset":
        """The (K,H)-biset with k.u.h = h^-1 u k^-1."""
        H, K = self.H, self.K
        left = [self.right[K.inv[k]] for k in range(K.order)]
        right = [self.left[H.inv[h]] for h in range(H.order)]
        return Biset(K, H, left, right, name=f"op({self.name})", check=False)

    def right_orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for u in range(self.size):
            if u not in seen:
                orb = sorted({self.right[k][u] for k in range(self.K.order)})
                seen.update(orb)
                out.append(orb)
        return out

    def double_orbits(self, L: int | None = None) -> list[list[int]]:
        """(L,K)-orbits on U, L a subgroup bitset of H (default H)."""
        ls = members(L if L is not None else self.H.all_bits)
        seen = set()
        out = []
        for u in range(self.size):
            if u in seen:
                continue
            orb = set()
            for l in ls:
                lu = self.left[l][u]
                for k in range(self.K.order):
                    orb.add(self.right[k][lu])
            seen |= orb
            out.append(sorted(orb))
        return out

    def right_stabilizer(self, u: int) -> int:
        return bits_of(k for k in range(self.K.order) if self.right[k][u] == u)

    def disjoint_union(self, other: "Biset") -> "Biset":
        if not (same_group(other.H, self.H) and same_group(other.K, self.K)):
            raise GroupError("group mismatch")
        n = self.size
        left = [a + tuple(x + n for x in b) for a, b in zip(self.left, other.left)]
        right = [a + tuple(x + n for x in b) for a, b in zip(self.right, other.right)]
        return Biset(self.H, self.K, left, right, name=f"{self.name}+{other.name}", check=False)


def graph_biset(H: FiniteGroup, K: FiniteGroup, phi, name="graph") -> Biset:
    """K as an (H,K)-biset with h.u.k = phi(h) u k, for a homomorphism phi: H -> K."""
    phi = tuple(phi)
    if len(phi) != H.order:
        raise GroupError("phi must map every element of H")
    for a in range(H.order):
        for b in range(H.order):
            if phi[H.mult[a][b]] != K.mult[phi[a]][phi[b]]:
                raise GroupError("phi is not a homomorphism")
    left = [[K.mult[phi[h]][u] for u in range(K.order)] for h in range(H.order)]
    right = [[K.mult[u][k] for u in range(K.order)] for k in range(K.order)]
    return Biset(H, K, left, right, name=name, check=False)


def identity_biset(G: FiniteGroup) -> Biset:
    return graph_biset(G, G, range(G.order), name="id")


def _sub(H: FiniteGroup, K):
    """Accept K as a subgroup bitset of H or as (group, embedding)."""
    if isinstance(K, int):
        if not H.is_subgroup(K):
            raise GroupError("K is not a subgroup of H")
        return H.subgroup_group(K)
    Kg, emb = K
    return Kg, tuple(emb)


def basic_biset(kind: str, H: FiniteGroup, data) -> Biset:
    """The five basic bisets.

    ind: data = K <= H, gives H as (H,K)-biset;  res: H as (K,H)-biset;
    inf: data = normal N, gives H/N as (H, H/N)-biset;  def: H/N as (H/N, H)-biset;
    iso: data = (K, phi) with phi: K -> H an isomorphism, gives H as (H,K)-biset.
    """
    m = H.mult
    if kind in ("ind", "res"):
        Kg, emb = _sub(H, data)
        if kind == "res":
            return graph_biset(Kg, H, emb, name="res")
        left = [[m[h][u] for u in range(H.order)] for h in range(H.order)]
        right = [[m[u][emb[k]] for u in range(H.order)] for k in range(Kg.order)]
        return Biset(H, Kg, left, right, name="ind", check=False)
    if kind in ("inf", "def"):
        Q, proj = quotient_group(H, data)
        if kind == "inf":
            return graph_biset(H, Q, proj, name="inf")
        left = [[Q.mult[q][u] for u in range(Q.order)] for q in range(Q.order)]
        right = [[Q.mult[u][proj[h]] for u in range(Q.order)] for h in range(H.order)]
        return Biset(Q, H, left, right, name="def", check=False)
    if kind == "iso":
        K, phi = data
        phi = tuple(phi)
        if K.order != H.order or sorted(phi) != list(range(H.order)):
            raise GroupError("phi is not a bijection")
        if any(phi[K.mult[a][b]] != m[phi[a]][phi[b]] for a in range(K.order) for b in range(K.order)):
            raise GroupError("phi is not a homomorphism")
        left = [[m[h][u] for u in range(H.order)] for h in range(H.order)]
        right = [[m[u][phi[k]] for u in range(H.order)] for k in range(K.order)]
        return Biset(H, K, left, right, name="iso", check=False)
    raise GroupError(f"unknown basic biset kind {kind!r}")


def induction_biset(H: FiniteGroup, K) -> Biset:
    return basic_biset("ind", H, K)


def compose(U: Biset, V: Biset) -> Biset:
    """U x_K V for an (H,K)-biset U and a (K,L)-biset V."""
    if not same_group(U.K, V.H):
        raise GroupError("middle groups do not match")
    K = U.K
    nv = V.size
    pair_orbit = {}
    reps = []
    for u in range(U.size):
        for v in range(nv):
            if (u, v) in pair_orbit:
                continue
            idx = len(reps)
            reps.append((u, v))
            for k in range(K.order):
                # (u k, k^-1 v)
                pair_orbit[(U.right[k][u], V.left[K.inv[k]][v])] = idx
    left = [[pair_orbit[(U.left[h][u], v)] for (u, v) in reps] for h in range(U.H.order)]
    right = [[pair_orbit[(u, V.right[l][v])] for (u, v) in reps] for l in range(V.K.order)]
    return Biset(U.H, V.K, left, right, name=f"({U.name})x({V.name})", check=False)


def l_u_subgroup(U: Biset, L: int, u: int) -> int:
    """L^u = {k in K : u k = l u for some l in L}, as a bitset of K."""
    Lu = {U.left[l][u] for l in members(L)}
    return bits_of(k for k in range(U.K.order) if U.right[k][u] in Lu)


def orbit_decomposition_uop(U: Biset, L: int) -> list[tuple[int, int]]:
    """One (u, L^u) per (L,K)-double orbit of U."""
    out = []
    for orb in U.double_orbits(L):
        u = orb[0]
        out.append((u, l_u_subgroup(U, L, u)))
    return out


def stabilizer_in_product(U: Biset, u: int) -> frozenset:
    """{(h,k) : h u k^-1 = u}."""
    K = U.K
    return frozenset((h, k) for h in range(U.H.order) for k in range(K.order)
                     if U.right[K.inv[k]][U.left[h][u]] == u)


def isomorphic(U: Biset, V: Biset) -> bool:
    """Biset isomorphism: the H x K-orbits match up with conjugate stabilizers."""
    if not (same_group(U.H, V.H) and same_group(U.K, V.K)) or U.size != V.size:
        return False
    H, K = U.H, U.K

    def orbit_stabs(B):
        return [stabilizer_in_product(B, orb[0]) for orb in _hk_orbits(B)]

    def conj_class(S):
        out = set()
        for a in range(H.order):
            for b in range(K.order):
                out.add(frozenset((H.conj(a, h), K.conj(b, k)) for h, k in S))
        return frozenset(out)

    cu = Counter(conj_class(S) for S in orbit_stabs(U))
    cv = Counter(conj_class(S) for S in orbit_stabs(V))
    return cu == cv


def _hk_orbits(B: Biset) -> list[list[int]]:
    seen = set()
    out = []
    for u in range(B.size):
        if u in seen:
            continue
        orb = {B.right[k][B.left[h][u]] for h in range(B.H.order) for k in range(B.K.order)}
        seen |= orb
        out.append(sorted(orb))
    return out
