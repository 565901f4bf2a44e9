"""Super class functions C(G): values on conjugacy classes of subgroups.

Values are stored in the idempotent basis, i.e. ``values[i]`` is f at class i.
"""
from __future__ import annotations

from collections import Counter

from .biset import Biset, orbit_decomposition_uop
from .grp import FiniteGroup, GroupError, same_group


class SuperClassFunction:
    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values):
        self.group = group
        self.values = tuple(int(v) for v in values)
        if len(self.values) != len(group.lattice):
            raise GroupError(f"expected {len(group.lattice)} values, got {len(self.values)}")

    def __repr__(self):
        return f"SuperClassFunction({list(self.values)})"

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def at(self, bits: int) -> int:
        """Value at an arbitrary subgroup (given as a bitset)."""
        return self.values[self.group.lattice.class_index(bits)]

    def _check(self, other):
        if not isinstance(other, SuperClassFunction) or not same_group(self.group, other.group):
            raise GroupError("super class functions live on different groups")

    def __add__(self, other):
        self._check(other)
        return SuperClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return SuperClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return SuperClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, c: int):
        return SuperClassFunction(self.group, [c * a for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SuperClassFunction):
            return NotImplemented
        return same_group(self.group, other.group) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_json(self) -> dict:
        lat = self.group.lattice
        return {"group": getattr(self.group, "spec", self.group.name),
                "classes": [lat.descriptor(i) for i in range(len(lat))],
                "values": list(self.values)}


def zero(G: FiniteGroup) -> SuperClassFunction:
    return SuperClassFunction(G, [0] * len(G.lattice))


def constant(G: FiniteGroup, c: int = 1) -> SuperClassFunction:
    return SuperClassFunction(G, [c] * len(G.lattice))


def idempotent_basis(G: FiniteGroup) -> list[SuperClassFunction]:
    k = len(G.lattice)
    return [SuperClassFunction(G, [int(i == j) for j in range(k)]) for i in range(k)]


def omega_transitive(G: FiniteGroup, H: int) -> SuperClassFunction:
    """omega_{G/H} for the class index H: 1 exactly on classes K <=_G H."""
    lat = G.lattice
    return SuperClassFunction(G, [int(lat.leq[K][H]) for K in range(len(lat))])


def omega_basis(G: FiniteGroup) -> list[SuperClassFunction]:
    return [omega_transitive(G, H) for H in range(len(G.lattice))]


def to_omega_coordinates(f: SuperClassFunction) -> list[int]:
    """Coordinates c with f = sum_S c[S] omega_{G/S}.

    From e_K = sum_{S <=_G K} mu(S,K) omega_{G/S}: c[S] = sum_{K >=_G S} mu(S,K) f(K).
    """
    lat = f.group.lattice
    k = len(lat)
    mu = lat.mobius
    return [sum(mu[S][K] * f.values[K] for K in range(S, k) if lat.leq[S][K]) for S in range(k)]


def from_omega_coordinates(G: FiniteGroup, coords) -> SuperClassFunction:
    lat = G.lattice
    k = len(lat)
    if len(coords) != k:
        raise GroupError("wrong number of coordinates")
    return SuperClassFunction(G, [sum(coords[S] for S in range(K, k) if lat.leq[K][S])
                                  for K in range(k)])


def evaluate(f: SuperClassFunction, X) -> int:
    """f paired with a G-set X: the sum over orbits of f at the stabilizer."""
    from .gset import stabilizer_classes
    if not same_group(X.group, f.group):
        raise GroupError("G-set and function live on different groups")
    return sum(n * f.values[c] for c, n in stabilizer_classes(X).items())


def jnd(U: Biset, f: SuperClassFunction) -> SuperClassFunction:
    """Generalized induction along an (H,K)-biset:
    (Jnd_U f)(L) = sum over L\\U/K of f(L^u)."""
    if not same_group(U.K, f.group):
        raise GroupError("biset right group does not match the function's group")
    H = U.H
    klat = U.K.lattice
    vals = []
    for L in H.lattice.reps:
        vals.append(sum(f.values[klat.class_index(Lu)] for _, Lu in orbit_decomposition_uop(U, L)))
    return SuperClassFunction(H, vals)


def uop_times_coset_set(U: Biset, L: int):
    """The K-set U^op x_H (H/L), built directly from pairs (u, hL)."""
    from .gset import GSet, transitive_gset
    H, K = U.H, U.K
    HL = transitive_gset(H, L)
    # classes of U x H/L under (u, c) ~ (h u, h c)
    cls = {}
    reps = []
    for u in range(U.size):
        for c in range(HL.size):
            if (u, c) in cls:
                continue
            idx = len(reps)
            reps.append((u, c))
            for h in range(H.order):
                cls[(U.left[h][u], HL.action[h][c])] = idx
    # k acts by (u, c) -> (u k^-1, c)
    action = [[cls[(U.right[K.inv[k]][u], c)] for (u, c) in reps] for k in range(K.order)]
    return GSet(K, action, check=False)


def jnd_direct(U: Biset, f: SuperClassFunction) -> SuperClassFunction:
    """Jnd_U f evaluated as f(U^op x_H (H/L)) without the L^u shortcut."""
    if not same_group(U.K, f.group):
        raise GroupError("biset right group does not match the function's group")
    return SuperClassFunction(U.H, [evaluate(f, uop_times_coset_set(U, L))
                                    for L in U.H.lattice.reps])


def class_multiset(U: Biset, L: int) -> Counter:
    klat = U.K.lattice
    return Counter(klat.class_index(Lu) for _, Lu in orbit_decomposition_uop(U, L))
