"""Finite p-groups given by multiplication tables.

Elements are integer indices ``0..order-1``; subgroups are Python ``int``
bitsets over those indices (bit ``i`` set iff element ``i`` is a member).
"""
from __future__ import annotations

import json
import math
from collections import deque
from functools import cached_property
from itertools import product

DEFAULT_ORDER_CAP = 64


class GroupError(ValueError):
    pass


def bits_of(elements) -> int:
    b = 0
    for e in elements:
        b |= 1 << e
    return b


def members(bits: int) -> list[int]:
    s = bin(bits)[:1:-1]
    return [i for i, c in enumerate(s) if c == "1"]


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def _prime_power(n: int):
    """Return (p, k) with n == p**k, or None. n == 1 gives (None, 0)."""
    if n == 1:
        return None, 0
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


class FiniteGroup:
    """A finite group stored as a full multiplication table.

    ``mult[a][b]`` is the index of the product ``ab``.
    """

    def __init__(self, mult, identity=None, prime=None, labels=None, name=None,
                 check=True, order_cap=DEFAULT_ORDER_CAP):
        mult = tuple(tuple(int(x) for x in row) for row in mult)
        n = len(mult)
        if n == 0:
            raise GroupError("empty multiplication table")
        if n > order_cap:
            raise GroupError(f"group order {n} exceeds cap {order_cap}")
        if any(len(row) != n for row in mult):
            raise GroupError("multiplication table is not square")
        if any(not 0 <= x < n for row in mult for x in row):
            raise GroupError("table entry out of range")
        self.order = n
        self.mult = mult
        if identity is None:
            cands = [e for e in range(n) if all(mult[e][x] == x and mult[x][e] == x for x in range(n))]
            if not cands:
                raise GroupError("no identity element")
            identity = cands[0]
        self.identity = identity
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if mult[a][b] == identity:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise GroupError(f"element {a} has no inverse")
        self.inv = tuple(inv)
        pk = _prime_power(n)
        if pk is None:
            raise GroupError(f"order {n} is not a prime power")
        if pk[0] is not None:
            if prime is not None and prime != pk[0]:
                raise GroupError(f"order {n} is not a power of {prime}")
            prime = pk[0]
        self.prime = prime
        self.labels = tuple(labels) if labels is not None else None
        self.name = name
        self.spec = None
        if check:
            self.validate()

    def validate(self):
        n, m, e = self.order, self.mult, self.identity
        for x in range(n):
            if m[e][x] != x or m[x][e] != x:
                raise GroupError("identity law fails")
            if m[x][self.inv[x]] != e or m[self.inv[x]][x] != e:
                raise GroupError("inverse law fails")
        for a in range(n):
            ma = m[a]
            for b in range(n):
                ab = ma[b]
                mab = m[ab]
                mb = m[b]
                for c in range(n):
                    if mab[c] != ma[mb[c]]:
                        raise GroupError(f"not associative at ({a},{b},{c})")
        # latin square: every row is a permutation
        for row in m:
            if len(set(row)) != n:
                raise GroupError("table is not a latin square")

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    # --- element arithmetic

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mult[self.mult[g][x]][self.inv[g]]

    def power(self, a: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.mult[r][a]
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mult[x][a]
            k += 1
        return k

    @cached_property
    def all_bits(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def trivial_bits(self) -> int:
        return 1 << self.identity

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    # --- subgroups

    def closure(self, gens, start: int = 0) -> int:
        """Bitset of the subgroup generated by ``gens`` and the subgroup ``start``."""
        gens = list(gens)
        if start:
            gens += members(start)
        bits = self.trivial_bits | start
        queue = deque(members(bits))
        m = self.mult
        while queue:
            x = queue.popleft()
            for g in gens:
                y = m[x][g]
                if not bits >> y & 1:
                    bits |= 1 << y
                    queue.append(y)
        return bits

    def is_subgroup(self, bits: int) -> bool:
        if not bits >> self.identity & 1:
            return False
        els = members(bits)
        for a in els:
            if not bits >> self.inv[a] & 1:
                return False
            for b in els:
                if not bits >> self.mult[a][b] & 1:
                    return False
        return True

    def conjugate_bits(self, g: int, bits: int) -> int:
        out = 0
        for x in members(bits):
            out |= 1 << self.conj(g, x)
        return out

    def is_normal(self, n_bits: int, in_bits: int | None = None) -> bool:
        """Is N normal in H (H defaults to the whole group)?"""
        if in_bits is None:
            in_bits = self.all_bits
        if n_bits & ~in_bits:
            return False
        return all(self.conjugate_bits(h, n_bits) == n_bits for h in members(in_bits))

    def subgroup_group(self, bits: int):
        """The subgroup ``bits`` as a FiniteGroup; returns (K, embedding)."""
        els = members(bits)
        index = {x: i for i, x in enumerate(els)}
        table = [[index[self.mult[a][b]] for b in els] for a in els]
        labels = [self.label(a) for a in els] if self.labels else None
        K = FiniteGroup(table, identity=index[self.identity], prime=self.prime,
                        labels=labels, check=False)
        return K, tuple(els)

    def center(self) -> int:
        return bits_of(z for z in range(self.order)
                       if all(self.mult[z][x] == self.mult[x][z] for x in range(self.order)))

    def is_abelian(self) -> bool:
        m = self.mult
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return subgroup_lattice(self)


def same_group(A: FiniteGroup, B: FiniteGroup) -> bool:
    return A is B or (A.mult == B.mult and A.identity == B.identity)


# ---------------------------------------------------------------------------
# construction

def _cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def _abelian_table(factors):
    elems = list(product(*[range(f) for f in factors]))
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[tuple((x + y) % f for x, y, f in zip(a, b, factors))] for b in elems]
             for a in elems]
    labels = ["(" + ",".join(map(str, e)) + ")" for e in elems]
    return table, labels


def _metacyclic_table(n, twist, y_order, y_power):
    """Elements x^a y^b (0<=a<n, 0<=b<y_order) with y x y^-1 = x^twist and
    y^y_order = x^y_power; index a + n*b."""
    elems = [(a, b) for b in range(y_order) for a in range(n)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(e, f):
        a, b = e
        c, d = f
        # y^b x^c = x^(c*twist^b) y^b
        a2 = (a + c * pow(twist, b, n)) % n
        b2 = b + d
        if b2 >= y_order:
            b2 -= y_order
            a2 = (a2 + y_power) % n
        return a2, b2

    table = [[index[mul(e, f)] for f in elems] for e in elems]

    def lab(a, b):
        s = ("x" if a == 1 else f"x^{a}") if a else ""
        s += ("y" if b == 1 else f"y^{b}") if b else ""
        return s or "1"
    labels = [lab(a, b) for a, b in elems]
    return table, labels


def _heisenberg_table(p):
    elems = [(a, b, c) for c in range(p) for b in range(p) for a in range(p)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[((a + x) % p, (b + y) % p, (c + z + a * y) % p)] for (x, y, z) in elems]
             for (a, b, c) in elems]
    labels = [f"[{a},{b},{c}]" for a, b, c in elems]
    return table, labels


def _perm_group_table(gens, points, cap):
    ident = tuple(range(points))
    perms = [ident]
    index = {ident: 0}
    queue = deque([ident])
    gens = [tuple(g) for g in gens]
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[x[i]] for i in range(points))  # apply x then g
            if y not in index:
                if len(perms) >= cap:
                    raise GroupError(f"generated group exceeds order cap {cap}")
                index[y] = len(perms)
                perms.append(y)
                queue.append(y)
    # product ab = "apply b then a"
    table = [[index[tuple(a[b[i]] for i in range(points))] for b in perms] for a in perms]
    return table, perms


def _cycles_to_perm(cycles, points):
    img = list(range(points))
    for cyc in cycles:
        for i, a in enumerate(cyc):
            if not 0 <= a < points:
                raise GroupError(f"point {a} out of range")
            img[a] = cyc[(i + 1) % len(cyc)]
    if len(set(img)) != points:
        raise GroupError("cycles do not define a permutation")
    return img


ALIASES = {
    "C2": ("cyclic", 2), "C4": ("cyclic", 4), "C8": ("cyclic", 8), "C16": ("cyclic", 16),
    "C3": ("cyclic", 3), "C9": ("cyclic", 9), "C27": ("cyclic", 27), "C5": ("cyclic", 5),
    "C25": ("cyclic", 25), "C7": ("cyclic", 7),
    "C2xC2": ("abelian", (2, 2)), "C2xC4": ("abelian", (2, 4)), "C2xC2xC2": ("abelian", (2, 2, 2)),
    "C3xC3": ("abelian", (3, 3)), "C3xC9": ("abelian", (3, 9)), "C5xC5": ("abelian", (5, 5)),
    "D8": ("dihedral", 8), "D16": ("dihedral", 16), "Q8": ("quaternion", 8),
    "Q16": ("quaternion", 16), "SD16": ("semidihedral", 16),
    "E27": ("extraspecial", 27), "3^1+2": ("extraspecial", 27), "M27": ("extraspecial-minus", 27),
    "E125": ("extraspecial", 125), "1": ("cyclic", 1),
}

# groups swept by ``verify all`` (order <= 32)
DEFAULT_CATALOG = ["C2", "C4", "C8", "C2xC2", "D8", "Q8", "SD16", "C3", "C9", "C27",
                   "C3xC3", "E27", "C5", "C5xC5"]


def _catalog(kind: str, arg, cap):
    if kind == "cyclic":
        n = int(arg)
        if n > cap:
            raise GroupError(f"order {n} exceeds cap {cap}")
        return FiniteGroup(_cyclic_table(n), identity=0, name=f"C{n}", order_cap=cap)
    if kind in ("abelian", "elementary"):
        if kind == "elementary":
            if isinstance(arg, str) and "^" in arg:
                p, k = map(int, arg.split("^"))
            else:
                pk = _prime_power(int(arg))
                if pk is None:
                    raise GroupError(f"{arg} is not a prime power")
                p, k = pk
            factors = (p,) * k
        else:
            factors = tuple(int(f) for f in (arg if not isinstance(arg, (int, str)) else str(arg).split(",")))
        if math.prod(factors) > cap:
            raise GroupError(f"order {math.prod(factors)} exceeds cap {cap}")
        table, labels = _abelian_table(factors)
        return FiniteGroup(table, identity=0, labels=labels,
                           name="x".join(f"C{f}" for f in factors), order_cap=cap)
    n = int(arg)
    if n > cap:
        raise GroupError(f"order {n} exceeds cap {cap}")
    if kind in ("dihedral", "quaternion", "semidihedral"):
        pk = _prime_power(n)
        if pk is None or pk[0] != 2:
            raise GroupError(f"{kind} groups need order 2^k, got {n}")
        h = n // 2
        if kind == "dihedral":
            if n < 4:
                raise GroupError("dihedral order must be >= 4")
            table, labels = _metacyclic_table(h, h - 1, 2, 0)
            labels = [s.replace("x", "r").replace("y", "s") for s in labels]
            name = f"D{n}"
        elif kind == "quaternion":
            if n < 8:
                raise GroupError("quaternion order must be >= 8")
            table, labels = _metacyclic_table(h, h - 1, 2, h // 2)
            name = f"Q{n}"
        else:
            if n < 16:
                raise GroupError("semidihedral order must be >= 16")
            table, labels = _metacyclic_table(h, h // 2 - 1, 2, 0)
            name = f"SD{n}"
        return FiniteGroup(table, identity=0, labels=labels, name=name, order_cap=cap)
    if kind in ("extraspecial", "extraspecial-minus"):
        pk = _prime_power(n)
        if pk is None or pk[1] != 3 or pk[0] == 2:
            raise GroupError("extraspecial catalog entries are p^3 for odd p")
        p = pk[0]
        if kind == "extraspecial":
            table, labels = _heisenberg_table(p)
            name = f"{p}^1+2"
        else:
            table, labels = _metacyclic_table(p * p, 1 + p, p, 0)
            name = f"M{n}"
        return FiniteGroup(table, identity=0, labels=labels, name=name, order_cap=cap)
    raise GroupError(f"unknown catalog kind {kind!r}")


def build_group(spec, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a validated group from a catalog name, a ``kind:arg`` string,
    or a JSON-style dict (``catalog`` / ``table`` / ``perm_gens``)."""
    if isinstance(spec, FiniteGroup):
        return spec
    G = _build(spec, order_cap)
    if getattr(G, "spec", None) is None:
        G.spec = spec.strip() if isinstance(spec, str) and not spec.strip().startswith("{") \
            else (G.name or f"order {G.order}")
    return G


def _build(spec, order_cap):
    if isinstance(spec, str):
        s = spec.strip()
        if s.startswith("{"):
            return _build(json.loads(s), order_cap)
        if s in ALIASES:
            kind, arg = ALIASES[s]
            G = _catalog(kind, arg, order_cap)
            G.name = s
            return G
        if ":" in s:
            kind, arg = s.split(":", 1)
            return _catalog(kind.strip(), arg.strip(), order_cap)
        raise GroupError(f"unrecognised group spec {spec!r}")
    if isinstance(spec, dict):
        if "catalog" in spec:
            c = spec["catalog"]
            if isinstance(c, str):
                return _build(c, order_cap)
            kind = c["kind"]
            arg = c.get("order", c.get("factors"))
            if arg is None:
                raise GroupError("catalog entry needs 'order' or 'factors'")
            return _catalog(kind, arg, order_cap)
        if "table" in spec:
            return FiniteGroup(spec["table"], labels=spec.get("labels"), name=spec.get("name"),
                               prime=spec.get("prime"), order_cap=order_cap)
        if "perm_gens" in spec:
            points = int(spec["points"])
            gens = [_cycles_to_perm(g, points) for g in spec["perm_gens"]]
            table, perms = _perm_group_table(gens, points, order_cap)
            labels = [str(list(p)) for p in perms]
            return FiniteGroup(table, identity=0, labels=labels, name=spec.get("name"),
                               order_cap=order_cap)
    raise GroupError(f"unrecognised group spec {spec!r}")


# ---------------------------------------------------------------------------
# subgroup lattice

class SubgroupLattice:
    """All subgroups of G with their conjugacy classes, ``<=_G`` and Moebius table.

    ``reps[i]`` is the bitset of the representative of class ``i``; classes are
    ordered by subgroup order, then by sorted member tuple.
    """

    def __init__(self, group, subgroups, classes):
        self.group = group
        self.subgroups = subgroups
        self.classes = classes
        self.reps = [c[0] for c in classes]
        self.class_of = {}
        for i, c in enumerate(classes):
            for s in c:
                self.class_of[s] = i
        k = len(classes)
        self.leq = [[any(s & ~self.reps[j] == 0 for s in classes[i]) for j in range(k)]
                    for i in range(k)]
        self.mobius = _mobius_table(self.leq)

    def __len__(self):
        return len(self.classes)

    def class_index(self, bits: int) -> int:
        return self.class_of[bits]

    def order_of(self, i: int) -> int:
        return popcount(self.reps[i])

    def rep_members(self, i: int) -> list[int]:
        return members(self.reps[i])

    def top(self) -> int:
        return len(self.classes) - 1

    def name(self, i: int) -> str:
        G = self.group
        n = self.order_of(i)
        if n == 1:
            return "1"
        if n == G.order:
            return "G"
        return f"H{i}"

    def descriptor(self, i: int) -> dict:
        return {"index": i, "name": self.name(i), "order": self.order_of(i),
                "size_of_class": len(self.classes[i]),
                "members": [self.group.label(x) for x in self.rep_members(i)]}


def _mobius_table(leq):
    k = len(leq)
    mu = [[0] * k for _ in range(k)]
    for i in range(k):
        mu[i][i] = 1
        # classes are sorted by order, so j > i covers every strict upper bound
        for j in range(i + 1, k):
            if leq[i][j]:
                mu[i][j] = -sum(mu[i][t] for t in range(i, j) if leq[i][t] and leq[t][j])
    return mu


def all_subgroups(G: FiniteGroup) -> list[int]:
    """Every subgroup, by closure over cyclic extensions of known subgroups."""
    found = {G.trivial_bits}
    queue = deque([G.trivial_bits])
    while queue:
        S = queue.popleft()
        covered = S
        for g in range(G.order):
            if covered >> g & 1:
                continue
            T = G.closure([g], start=S)
            # <S, g> = <S, gs> for s in S: skip the whole coset gS
            for s in members(S):
                covered |= 1 << G.mult[g][s]
            if T not in found:
                found.add(T)
                queue.append(T)
    return sorted(found, key=lambda b: (popcount(b), members(b)))


def subgroup_lattice(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> SubgroupLattice:
    if G.order > order_cap:
        raise GroupError(f"group order {G.order} exceeds cap {order_cap}")
    subs = all_subgroups(G)
    seen = set()
    classes = []
    for S in subs:
        if S in seen:
            continue
        cls = {G.conjugate_bits(g, S) for g in range(G.order)}
        seen |= cls
        classes.append(sorted(cls, key=members))
    classes.sort(key=lambda c: (popcount(c[0]), members(c[0])))
    return SubgroupLattice(G, subs, classes)


def mobius(lattice: SubgroupLattice, S: int, T: int) -> int:
    """Moebius function of the poset of conjugacy classes (class indices)."""
    return lattice.mobius[S][T]


# ---------------------------------------------------------------------------
# cosets, quotients, subquotients

def left_coset(G, g, bits) -> int:
    return bits_of(G.mult[g][s] for s in members(bits))


def double_cosets(G: FiniteGroup, A: int, B: int) -> list[int]:
    """One representative per double coset A g B, smallest index first."""
    seen = 0
    reps = []
    a_el, b_el = members(A), members(B)
    m = G.mult
    for g in range(G.order):
        if seen >> g & 1:
            continue
        reps.append(g)
        for a in a_el:
            ag = m[a][g]
            for b in b_el:
                seen |= 1 << m[ag][b]
    return reps


def double_coset_bits(G, A, g, B) -> int:
    m = G.mult
    return bits_of(m[m[a][g]][b] for a in members(A) for b in members(B))


def quotient_group(G: FiniteGroup, N: int):
    """G/N as a FiniteGroup together with the projection (list: element -> coset index)."""
    if not G.is_subgroup(N):
        raise GroupError("N is not a subgroup")
    if not G.is_normal(N):
        raise GroupError("N is not normal")
    proj = [None] * G.order
    reps = []
    for g in range(G.order):
        if proj[g] is None:
            idx = len(reps)
            reps.append(g)
            for n in members(N):
                proj[G.mult[g][n]] = idx
    table = [[proj[G.mult[a][b]] for b in reps] for a in reps]
    labels = [G.label(r) + "N" for r in reps] if G.labels else None
    Q = FiniteGroup(table, identity=proj[G.identity], prime=G.prime, labels=labels, check=False)
    return Q, tuple(proj)


def subquotient_type(G: FiniteGroup, H: int, L: int) -> str:
    """Isomorphism tag of H/L among Cp_odd, C4, CpxCp, Q8, other."""
    if L & ~H or not G.is_subgroup(H) or not G.is_subgroup(L):
        raise GroupError("need subgroups L <= H")
    if not G.is_normal(L, H):
        raise GroupError("L is not normal in H")
    Hg, emb = G.subgroup_group(H)
    pos = {x: i for i, x in enumerate(emb)}
    Q, _ = quotient_group(Hg, bits_of(pos[x] for x in members(L)))
    n = Q.order
    pk = _prime_power(n)
    if pk is None or pk[0] is None:
        return "other"
    p, k = pk
    orders = [Q.element_order(a) for a in range(n)]
    if k == 1:
        return "Cp_odd" if p != 2 else "other"
    if k == 2:
        if max(orders) == p:
            return "CpxCp"
        if p == 2:
            return "C4"
        return "other"
    if n == 8 and orders.count(2) == 1 and max(orders) == 4:
        return "Q8"
    return "other"
