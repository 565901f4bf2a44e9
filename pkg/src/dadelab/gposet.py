"""G-posets: cones, symmetric joins, t_U and jn_U along bisets, fixed subposets,
flag complexes and their cell G-sets.

A poset is stored by up-sets: ``up[i]`` is the bitset of elements strictly above i.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from .biset import Biset
from .grp import FiniteGroup, GroupError, build_group, members, popcount, same_group
from .gset import GSet

MAX_ELEMENTS = 20_000
MAX_CHAINS = 2_000_000


class SizeCapError(GroupError):
    """A construction would exceed the configured size cap."""


@lru_cache(maxsize=None)
def trivial_group() -> FiniteGroup:
    return build_group("1")


class GPoset:
    """A finite poset with an order-preserving action; ``action[g][i]`` is g.i."""

    def __init__(self, group: FiniteGroup, names, up, action=None, check=True):
        self.group = group
        self.names = tuple(str(x) for x in names)
        self.up = tuple(up)
        n = len(self.names)
        if action is None:
            action = [tuple(range(n))] * group.order
        self.action = tuple(tuple(r) for r in action)
        if len(self.up) != n:
            raise GroupError("need one up-set per element")
        if n > MAX_ELEMENTS:
            raise SizeCapError(f"poset has {n} elements, cap is {MAX_ELEMENTS}")
        if check:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"GPoset({self.group!r}, size={self.size})"

    def validate(self):
        n, up = self.size, self.up
        full = (1 << n) - 1
        for i in range(n):
            if up[i] >> i & 1:
                raise GroupError("order relation is not irreflexive")
            if up[i] & ~full:
                raise GroupError("up-set refers to a missing element")
            for j in members(up[i]):
                if up[j] & ~up[i]:
                    raise GroupError("order relation is not transitive")
        G, act = self.group, self.action
        if len(act) != G.order or any(len(r) != n for r in act):
            raise GroupError("action table has the wrong shape")
        if act[G.identity] != tuple(range(n)):
            raise GroupError("identity does not act trivially")
        for g in range(G.order):
            ag = act[g]
            if sorted(ag) != list(range(n)):
                raise GroupError("group element does not act by a permutation")
            for h in range(G.order):
                agh = act[G.mult[g][h]]
                if any(ag[act[h][x]] != agh[x] for x in range(n)):
                    raise GroupError("not a group action")
            for i in range(n):
                img = 0
                for j in members(up[i]):
                    img |= 1 << ag[j]
                if img != up[ag[i]]:
                    raise GroupError("action does not preserve the order")

    # --- order queries

    def less(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in members(self.up[i])]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.size):
            above = self.up[i]
            for j in members(above):
                # j covers i unless some k strictly between
                if not any(self.up[k] >> j & 1 for k in members(above)):
                    out.append((i, j))
        return out

    def down(self) -> list[int]:
        d = [0] * self.size
        for i in range(self.size):
            for j in members(self.up[i]):
                d[j] |= 1 << i
        return d

    def height(self) -> int:
        """Number of elements in a longest chain minus one (the flag-complex dimension);
        -1 for the empty poset."""
        memo = {}

        def longest(i):
            if i not in memo:
                memo[i] = 1 + max((longest(j) for j in members(self.up[i])), default=0)
            return memo[i]
        return max((longest(i) for i in range(self.size)), default=0) - 1

    def induced(self, keep) -> "GPoset":
        """Induced subposet on ``keep`` over the trivial group."""
        keep = list(keep)
        pos = {x: i for i, x in enumerate(keep)}
        up = []
        for x in keep:
            b = 0
            for y in members(self.up[x]):
                if y in pos:
                    b |= 1 << pos[y]
            up.append(b)
        return GPoset(trivial_group(), [self.names[x] for x in keep], up, check=False)

    def without(self, drop: int) -> "GPoset":
        """Remove a G-fixed element, keeping the action."""
        if any(self.action[g][drop] != drop for g in range(self.group.order)):
            raise GroupError("only fixed elements can be removed equivariantly")
        keep = [x for x in range(self.size) if x != drop]
        pos = {x: i for i, x in enumerate(keep)}
        sub = self.induced(keep)
        action = [[pos[self.action[g][x]] for x in keep] for g in range(self.group.order)]
        return GPoset(self.group, sub.names, sub.up, action, check=False)

    def forget(self) -> "GPoset":
        """The same poset over the trivial group."""
        return GPoset(trivial_group(), self.names, self.up, check=False)

    def to_json(self) -> dict:
        G = self.group
        return {"group": getattr(G, "spec", None) or G.name,
                "elements": list(self.names),
                "less": [list(c) for c in self.covers()],
                "relation": "covers",
                "action": [list(r) for r in self.action]}


def poset_from_relations(group, names, less, action=None, closure=True, check=True) -> GPoset:
    """Build from a list of pairs i < j (covers or the full relation)."""
    n = len(names)
    up = [0] * n
    for i, j in less:
        if not (0 <= i < n and 0 <= j < n):
            raise GroupError("relation refers to a missing element")
        up[i] |= 1 << j
    if closure:
        # transitive closure by repeated propagation in reverse topological order
        changed = True
        while changed:
            changed = False
            for i in range(n):
                b = up[i]
                for j in members(b):
                    b |= up[j]
                if b != up[i]:
                    up[i] = b
                    changed = True
                    if b >> i & 1:
                        raise GroupError("relation has a cycle")
    return GPoset(group, names, up, action, check=check)


def gposet_from_json(data: dict, group: FiniteGroup | None = None) -> GPoset:
    from .gset import _default_generators
    G = group if group is not None else build_group(data["group"])
    names = data["elements"]
    n = len(names)
    if "action" in data:
        action = data["action"]
    elif "gen_action" in data:
        gens = data.get("generators") or _default_generators(G)[:len(data["gen_action"])]
        if any(len(p) != n for p in data["gen_action"]):
            raise GroupError("generator permutation has wrong length")
        action = GSet.from_generators(G, gens, data["gen_action"]).action
    else:
        action = None
    return poset_from_relations(G, names, [tuple(x) for x in data.get("less", [])], action)


# ---------------------------------------------------------------------------
# constructions

def discrete_poset(X: GSet) -> GPoset:
    return GPoset(X.group, [str(i) for i in range(X.size)], [0] * X.size, X.action, check=False)


def empty_poset(G: FiniteGroup) -> GPoset:
    return GPoset(G, [], [], [()] * G.order, check=False)


def point_poset(G: FiniteGroup, k: int = 1) -> GPoset:
    """k fixed points (an antichain)."""
    return GPoset(G, [f"p{i}" for i in range(k)], [0] * k, check=False)


def cone(X: GPoset) -> GPoset:
    """cX: a new fixed bottom element 0 (index 0) below everything."""
    n = X.size
    names = ["0"] + list(X.names)
    up = [((1 << n) - 1) << 1] + [u << 1 for u in X.up]
    action = [(0,) + tuple(y + 1 for y in row) for row in X.action]
    return GPoset(X.group, names, up, action, check=False)


def union(X: GPoset, Y: GPoset) -> GPoset:
    if not same_group(X.group, Y.group):
        raise GroupError("group mismatch")
    n = X.size
    names = [f"a{x}" for x in X.names] + [f"b{y}" for y in Y.names]
    up = list(X.up) + [u << n for u in Y.up]
    action = [a + tuple(y + n for y in b) for a, b in zip(X.action, Y.action)]
    return GPoset(X.group, names, up, action, check=False)


def _leq_sets(P: GPoset) -> list[int]:
    return [P.up[i] | 1 << i for i in range(P.size)]


def product_poset(factors):
    """Elements and up-sets of a product of posets (tuples in lexicographic order)."""
    sizes = [P.size for P in factors]
    elems = list(product(*[range(s) for s in sizes]))
    if len(elems) > MAX_ELEMENTS + 1:
        raise SizeCapError(f"product has {len(elems)} elements, cap is {MAX_ELEMENTS}")
    index = {e: i for i, e in enumerate(elems)}
    # geq[j][x]: bitset of tuples whose j-th coordinate is >= x
    geq = []
    for j, P in enumerate(factors):
        val = [0] * P.size
        for i, e in enumerate(elems):
            val[e[j]] |= 1 << i
        le = _leq_sets(P)
        geq.append([_or_all(val[y] for y in members(le[x])) for x in range(P.size)])
    up = []
    for i, e in enumerate(elems):
        b = -1
        for j, x in enumerate(e):
            b &= geq[j][x]
        up.append(b & ~(1 << i))
    return elems, up, index


def _or_all(it) -> int:
    b = 0
    for x in it:
        b |= x
    return b


def join(X: GPoset, Y: GPoset) -> GPoset:
    """Symmetric join (cX x cY) - {(0,0)} with the diagonal action."""
    return join_many([X, Y])


def join_many(parts) -> GPoset:
    """Iterated symmetric join: (prod c X_i) minus the all-bottom tuple."""
    parts = list(parts)
    if not parts:
        raise GroupError("need at least one poset")
    G = parts[0].group
    if any(not same_group(G, P.group) for P in parts):
        raise GroupError("group mismatch")
    cones = [cone(P) for P in parts]
    elems, up, index = product_poset(cones)
    # drop the bottom tuple (index 0)
    keep = range(1, len(elems))
    names = ["(" + ",".join(c.names[x] for c, x in zip(cones, elems[i])) + ")" for i in keep]
    up = [u >> 1 for u in up[1:]]
    action = []
    for g in range(G.order):
        row = []
        for i in keep:
            img = tuple(c.action[g][x] for c, x in zip(cones, elems[i]))
            row.append(index[img] - 1)
        action.append(row)
    return GPoset(G, names, up, action, check=False)


def suspension(X: GPoset) -> GPoset:
    return join(X, point_poset(X.group, 2))


def _right_orbit_data(U: Biset):
    """Representatives of the right K-orbits and, for every u, (orbit, k) with u = rep * k."""
    K = U.K
    reps = []
    where = {}
    for u in range(U.size):
        if u in where:
            continue
        i = len(reps)
        reps.append(u)
        for k in range(K.order):
            v = U.right[k][u]
            if v not in where:
                where[v] = (i, k)
    return reps, where


def t_U(U: Biset, X: GPoset) -> GPoset:
    """Map_K(U^op, X): K-equivariant maps f(uk) = k^-1 f(u), ordered pointwise,
    with (h f)(u) = f(h^-1 u). Elements are value tuples on right-orbit representatives."""
    K, H = U.K, U.H
    if not same_group(K, X.group):
        raise GroupError("poset group does not match the biset's right group")
    reps, where = _right_orbit_data(U)
    # values at a representative must be fixed by its stabilizer in K
    allowed = []
    for r in reps:
        stab = [k for k in range(K.order) if U.right[k][r] == r]
        allowed.append([x for x in range(X.size) if all(X.action[k][x] == x for k in stab)])
    total = 1
    for a in allowed:
        total *= len(a)
    if total > MAX_ELEMENTS:
        raise SizeCapError(f"t_U would have {total} elements, cap is {MAX_ELEMENTS}")
    factors = [X.induced(a) for a in allowed]
    elems, up, index = product_poset(factors)
    names = ["[" + ",".join(X.names[allowed[j][c]] for j, c in enumerate(e)) + "]" for e in elems]
    pos = [{x: c for c, x in enumerate(a)} for a in allowed]
    # h^-1 r_j = r_i k  =>  (h f)(r_j) = k^-1 f(r_i)
    moves = []
    for h in range(H.order):
        hinv = H.inv[h]
        moves.append([where[U.left[hinv][r]] for r in reps])
    action = []
    for h in range(H.order):
        mv = moves[h]
        row = []
        for e in elems:
            img = tuple(pos[j][X.action[K.inv[k]][allowed[i][e[i]]]] for j, (i, k) in enumerate(mv))
            row.append(index[img])
        action.append(row)
    return GPoset(H, names, up, action, check=False)


def jn_U(U: Biset, X: GPoset) -> GPoset:
    """Join induction: t_U(cX) minus the constant map to the cone point."""
    T = t_U(U, cone(X))
    return T.without(0)


def fixed_subposet(X: GPoset, L: int) -> GPoset:
    """The subposet of L-fixed elements (L a subgroup bitset), over the trivial group."""
    ls = members(L)
    keep = [x for x in range(X.size) if all(X.action[g][x] == x for g in ls)]
    return X.induced(keep)


def fixed_elements(X: GPoset, L: int) -> list[int]:
    ls = members(L)
    return [x for x in range(X.size) if all(X.action[g][x] == x for g in ls)]


# ---------------------------------------------------------------------------
# flag complexes

class FlagComplex:
    """All chains of a poset, by dimension; ``simplices[d]`` lists d-simplices as
    increasing tuples of elements."""

    def __init__(self, poset: GPoset, max_chains: int = MAX_CHAINS):
        self.poset = poset
        self.simplices = _chains(poset, max_chains)
        self.index = [{s: i for i, s in enumerate(level)} for level in self.simplices]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def f_vector(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def simplex_action(self, d: int) -> list[list[int]]:
        P = self.poset
        idx = self.index[d]
        return [[idx[tuple(P.action[g][x] for x in s)] for s in self.simplices[d]]
                for g in range(P.group.order)]

    def cell_gsets(self) -> list[GSet]:
        return [GSet(self.poset.group, self.simplex_action(d), check=False)
                for d in range(len(self.simplices))]

    def fixed_subcomplex(self, L: int) -> "FlagComplex":
        return FlagComplex(fixed_subposet(self.poset, L))


def _chains(P: GPoset, max_chains: int) -> list[list[tuple]]:
    levels: list[list[tuple]] = []
    count = 0
    stack = [((i,), P.up[i]) for i in reversed(range(P.size))]
    while stack:
        chain, above = stack.pop()
        d = len(chain) - 1
        while len(levels) <= d:
            levels.append([])
        levels[d].append(chain)
        count += 1
        if count > max_chains:
            raise SizeCapError(f"more than {max_chains} chains")
        for j in reversed(members(above)):
            stack.append((chain + (j,), above & P.up[j]))
    for level in levels:
        level.sort()
    return levels


def flag_complex(X: GPoset, max_chains: int = MAX_CHAINS) -> FlagComplex:
    return FlagComplex(X, max_chains)


def cell_gsets(F: FlagComplex) -> list[GSet]:
    return F.cell_gsets()


def is_full(cells, G: FiniteGroup | None = None) -> bool:
    """Property (**): whenever X_i^H is nonempty, so is X_j^H for every j <= i."""
    return not fullness_witness(cells, G)


def fullness_witness(cells, G: FiniteGroup | None = None):
    """First (class, i, j) violating property (**), or None."""
    from .gset import fixed_points
    if not cells:
        return None
    G = G or cells[0].group
    for c, H in enumerate(G.lattice.reps):
        nonempty = [bool(fixed_points(X, H)) for X in cells]
        for i, ne in enumerate(nonempty):
            if ne:
                for j in range(i):
                    if not nonempty[j]:
                        return (c, i, j)
    return None


# ---------------------------------------------------------------------------
# isomorphism

def _joint_refine(A, B, ca, cb):
    """Refine two colourings in lock step with a shared palette; None if they diverge.

    ``A`` and ``B`` are (up-lists, down-lists) of element indices."""
    na = len(ca)
    while True:
        sa = [(ca[i], tuple(sorted([ca[j] for j in A[0][i]])),
               tuple(sorted([ca[j] for j in A[1][i]]))) for i in range(na)]
        sb = [(cb[i], tuple(sorted([cb[j] for j in B[0][i]])),
               tuple(sorted([cb[j] for j in B[1][i]]))) for i in range(na)]
        if sorted(sa) != sorted(sb):
            return None
        palette = {s: r for r, s in enumerate(sorted(set(sa)))}
        new_a = [palette[s] for s in sa]
        new_b = [palette[s] for s in sb]
        if len(palette) == len(set(ca)):
            return new_a, new_b
        ca, cb = new_a, new_b


def find_isomorphism(P: GPoset, Q: GPoset):
    """An order isomorphism P -> Q as a list (P index -> Q index), or None.

    Individualisation-refinement: refine colours jointly, individualise one element of
    the smallest non-singleton class, backtrack over its possible images."""
    n = P.size
    if n != Q.size:
        return None
    if n == 0:
        return []
    if sorted(popcount(u) for u in P.up) != sorted(popcount(u) for u in Q.up):
        return None
    A = ([members(u) for u in P.up], [members(d) for d in P.down()])
    B = ([members(u) for u in Q.up], [members(d) for d in Q.down()])
    start = _joint_refine(A, B, [0] * n, [0] * n)
    if start is None:
        return None

    def search(ca, cb):
        classes = {}
        for i, c in enumerate(ca):
            classes.setdefault(c, []).append(i)
        if all(len(v) == 1 for v in classes.values()):
            where = {c: i for i, c in enumerate(cb)}
            m = [where[ca[i]] for i in range(n)]
            return m if _is_order_map(P, Q, m) else None
        c, cell = min(((c, v) for c, v in classes.items() if len(v) > 1),
                      key=lambda t: (len(t[1]), t[0]))
        v = cell[0]
        fresh = max(max(ca), max(cb)) + 1
        for w in [i for i, x in enumerate(cb) if x == c]:
            na, nb = list(ca), list(cb)
            na[v] = fresh
            nb[w] = fresh
            r = _joint_refine(A, B, na, nb)
            if r is None:
                continue
            m = search(*r)
            if m is not None:
                return m
        return None

    return search(*start)


def _is_order_map(P: GPoset, Q: GPoset, m) -> bool:
    if sorted(m) != list(range(Q.size)):
        return False
    for i in range(P.size):
        img = 0
        for j in members(P.up[i]):
            img |= 1 << m[j]
        if img != Q.up[m[i]]:
            return False
    return True


def isomorphic(P: GPoset, Q: GPoset) -> bool:
    return find_isomorphism(P, Q) is not None


# ---------------------------------------------------------------------------
# fixed points of join induction

def fixed_point_certificate(U: Biset, X: GPoset, L: int, _cache=None) -> dict:
    """Compare (jn_U X)^L with the iterated join over u in L\\U/K of X^{L^u}.

    Checks the explicit evaluation map f -> (f(u))_u is an order isomorphism and
    also searches for an isomorphism independently of that map. ``_cache`` may hold
    a ``JoinInduction`` of (U, X) shared across several L."""
    from .biset import orbit_decomposition_uop
    ji = _cache if _cache is not None else JoinInduction(U, X)
    J, cX, where, vals_of = ji.poset, ji.cone, ji.where, ji.values
    fixed = fixed_elements(J, L)
    lhs = J.induced(fixed)
    decomp = orbit_decomposition_uop(U, L)
    fixed_lists = [fixed_elements(X, Lu) for _, Lu in decomp]
    parts = [X.induced(fl) for fl in fixed_lists]
    rhs = join_many(parts) if parts else empty_poset(trivial_group())
    # explicit map f -> (f(u))_u; jn_U X is t_U(cX) with its index 0 removed
    # position of a cX element inside c(X^{L^u}): bottom -> 0, x+1 -> 1 + rank of x
    cone_pos = [{0: 0, **{x + 1: t + 1 for t, x in enumerate(fl)}} for fl in fixed_lists]
    sizes = [len(fl) + 1 for fl in fixed_lists]
    rhs_index = {tup: idx - 1 for idx, tup in enumerate(product(*[range(s) for s in sizes]))}
    explicit = []
    for f in fixed:
        vals = vals_of[f + 1]
        img = []
        for (u, _), cp in zip(decomp, cone_pos):
            i, k = where[u]
            img.append(cp.get(cX.action[U.K.inv[k]][vals[i]]))
        explicit.append(None if None in img else rhs_index[tuple(img)])
    explicit_ok = (None not in explicit and len(fixed) == rhs.size
                   and _is_order_map(lhs, rhs, explicit))
    iso = find_isomorphism(lhs, rhs)
    return {"lhs_size": lhs.size, "rhs_size": rhs.size,
            "double_orbits": len(decomp),
            "explicit_map": bool(explicit_ok), "isomorphic": iso is not None}


class JoinInduction:
    """jn_U X together with the value tuples of its elements (for certificates)."""

    def __init__(self, U: Biset, X: GPoset):
        self.cone = cone(X)
        reps, self.where = _right_orbit_data(U)
        self.poset = jn_U(U, X)
        self.values = _value_tuples(U, self.cone, reps)


def _value_tuples(U: Biset, X: GPoset, reps) -> list[tuple]:
    """The value tuples of t_U(X) in element order (values as X indices)."""
    K = U.K
    allowed = []
    for r in reps:
        stab = [k for k in range(K.order) if U.right[k][r] == r]
        allowed.append([x for x in range(X.size) if all(X.action[k][x] == x for k in stab)])
    return [tuple(allowed[j][c] for j, c in enumerate(e))
            for e in product(*[range(len(a)) for a in allowed])]
