"""Finite G-sets as explicit action tables."""
from __future__ import annotations

from collections import Counter

from .grp import FiniteGroup, GroupError, bits_of, build_group, members


class GSet:
    """``action[g][x]`` is the image of point ``x`` under ``g``."""

    def __init__(self, group: FiniteGroup, action, check=True):
        self.group = group
        self.action = tuple(tuple(row) for row in action)
        if len(self.action) != group.order:
            raise GroupError("action table needs one row per group element")
        self.size = len(self.action[0]) if self.action else 0
        if check:
            self.validate()

    def validate(self):
        G, act = self.group, self.action
        n = self.size
        if any(len(r) != n for r in act):
            raise GroupError("ragged action table")
        if tuple(act[G.identity]) != tuple(range(n)):
            raise GroupError("identity does not act trivially")
        for g in range(G.order):
            ag = act[g]
            for h in range(G.order):
                agh = act[G.mult[g][h]]
                ah = act[h]
                if any(ag[ah[x]] != agh[x] for x in range(n)):
                    raise GroupError("not a group action")

    @classmethod
    def from_generators(cls, group, gen_elements, gen_perms):
        """Extend an action given on generators to the whole group."""
        n = len(gen_perms[0]) if gen_perms else 0
        table = {group.identity: tuple(range(n))}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, perm in zip(gen_elements, gen_perms):
                    y = group.mult[g][x]
                    img = tuple(perm[table[x][i]] for i in range(n))
                    if y in table:
                        if table[y] != img:
                            raise GroupError("generator images do not define an action")
                    else:
                        table[y] = img
                        nxt.append(y)
            frontier = nxt
        if len(table) != group.order:
            raise GroupError("generators do not generate the group")
        return cls(group, [table[g] for g in range(group.order)])

    def __repr__(self):
        return f"GSet({self.group!r}, size={self.size})"

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(self.size):
            if x in seen:
                continue
            orb = sorted({self.action[g][x] for g in range(self.group.order)})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, x: int) -> int:
        return bits_of(g for g in range(self.group.order) if self.action[g][x] == x)

    def disjoint_union(self, other: "GSet") -> "GSet":
        if other.group is not self.group:
            raise GroupError("group mismatch")
        n = self.size
        return GSet(self.group, [a + tuple(y + n for y in b)
                                 for a, b in zip(self.action, other.action)], check=False)

    def to_json(self) -> dict:
        return {"points": self.size, "action": [list(r) for r in self.action]}


def empty_gset(G: FiniteGroup) -> GSet:
    return GSet(G, [()] * G.order, check=False)


def transitive_gset(G: FiniteGroup, H: int) -> GSet:
    """Left multiplication on the cosets G/H; the coset of the identity is point 0."""
    if not G.is_subgroup(H):
        raise GroupError("H is not a subgroup")
    cosets = []
    index = {}
    hs = members(H)
    for g in [G.identity] + [x for x in range(G.order) if x != G.identity]:
        if g in index:
            continue
        c = len(cosets)
        coset = [G.mult[g][h] for h in hs]
        cosets.append(g)
        for y in coset:
            index[y] = c
    action = [[index[G.mult[g][r]] for r in cosets] for g in range(G.order)]
    return GSet(G, action, check=False)


def fixed_points(X: GSet, H: int) -> list[int]:
    hs = members(H)
    return [x for x in range(X.size) if all(X.action[h][x] == x for h in hs)]


def restrict(X: GSet, K: int):
    """Res to K (K given as a subgroup bitset); returns (K-set, K as group, embedding)."""
    G = X.group
    Kg, emb = G.subgroup_group(K)
    return GSet(Kg, [X.action[g] for g in emb], check=False), Kg, emb


def omega(X: GSet):
    """The super class function K -> 1 if X^K is nonempty else 0."""
    from .cfun import SuperClassFunction
    lat = X.group.lattice
    vals = [1 if fixed_points(X, r) else 0 for r in lat.reps]
    return SuperClassFunction(X.group, vals)


def stabilizer_classes(X: GSet) -> Counter:
    """Multiset of stabilizer conjugacy classes, one per orbit (the orbit types of X)."""
    lat = X.group.lattice
    return Counter(lat.class_index(X.stabilizer(orb[0])) for orb in X.orbits())


def restrict_decompose(X: GSet, K: int) -> Counter:
    """Orbit types of Res_K X as a Counter of K-class indices (orbit by orbit)."""
    XK, Kg, _ = restrict(X, K)
    return stabilizer_classes(XK)


def restrict_transitive(G: FiniteGroup, T: int, K: int) -> Counter:
    """Orbit types of Res^G_K (G/T) as a Counter of K-class indices.

    Computed by double cosets: one orbit K/(K cap gTg^-1) per K g T.
    """
    from .grp import double_cosets
    if T & ~G.all_bits or K & ~G.all_bits:
        raise GroupError("subgroups out of range")
    Kg, emb = G.subgroup_group(K)
    pos = {x: i for i, x in enumerate(emb)}
    out = Counter()
    for g in double_cosets(G, K, T):
        inter = K & G.conjugate_bits(g, T)
        out[Kg.lattice.class_index(bits_of(pos[x] for x in members(inter)))] += 1
    return out


def gset_from_json(data: dict, group: FiniteGroup | None = None) -> GSet:
    G = group if group is not None else build_group(data["group"])
    if "action" in data:
        return GSet(G, data["action"])
    gens = data.get("gen_action")
    n = int(data["points"])
    if gens is None:
        raise GroupError("G-set JSON needs 'action' or 'gen_action'")
    # gen_action entries pair with the group's generators listed in 'generators'
    # (element indices); default: the first len(gens) non-identity elements that generate.
    gen_el = data.get("generators")
    if gen_el is None:
        gen_el = _default_generators(G)[:len(gens)]
    if any(len(p) != n for p in gens):
        raise GroupError("generator permutation has wrong length")
    return GSet.from_generators(G, gen_el, gens)


def _default_generators(G: FiniteGroup) -> list[int]:
    gens = []
    bits = G.trivial_bits
    for g in range(G.order):
        if not bits >> g & 1:
            gens.append(g)
            bits = G.closure(gens)
            if bits == G.all_bits:
                break
    return gens
