"""Borel-Smith functions, the quotient D^Omega(G) = C(G)/C_b(G), Psi, Omega_X,
tensor induction (via Jnd and via the Moebius / double-coset formula), the
tight-complex formula and the class of the homology of a Moore poset."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from .biset import induction_biset
from .cfun import SuperClassFunction, from_omega_coordinates, jnd
from .grp import FiniteGroup, GroupError, bits_of, double_cosets, members, popcount, subquotient_type
from .gset import GSet, fixed_points, omega, transitive_gset
from .moore import MooreReport, analyze
from .xalg import IntLattice, LatticeQuotient, det, integer_kernel, lattice_quotient


# ---------------------------------------------------------------------------
# Borel-Smith conditions

@dataclass
class Condition:
    """One linear condition c.f = 0 (modulus 0) or c.f = 0 mod m on class values."""
    kind: str
    H: int          # class index of H
    L: int          # class index of L
    coeffs: tuple
    modulus: int

    def holds(self, values) -> bool:
        s = sum(c * v for c, v in zip(self.coeffs, values))
        return s == 0 if self.modulus == 0 else s % self.modulus == 0

    def to_json(self) -> dict:
        return {"kind": self.kind, "H": self.H, "L": self.L,
                "coeffs": list(self.coeffs), "modulus": self.modulus}


def borel_smith_conditions(G: FiniteGroup) -> list[Condition]:
    """Conditions from every section L normal in H <= G (H up to conjugacy):
    (a) H/L = C_p, p odd:  f(L) = f(H) mod 2
    (b) H/L = C_4:         f(L) = f(H1) mod 2, H1/L of order 2
    (c) H/L = C_p x C_p:   f(L) - f(H) = sum_i (f(H_i) - f(H)) over the p+1 middle subgroups
    (d) H/L = Q_8:         f(L) = f(H1) mod 4, H1/L the centre
    """
    lat = G.lattice
    k = len(lat)
    out = []
    seen = set()
    for hi, H in enumerate(lat.reps):
        subs_of_H = [S for S in lat.subgroups if S & ~H == 0]
        for L in subs_of_H:
            if L == H or not G.is_normal(L, H):
                continue
            kind = subquotient_type(G, H, L)
            if kind == "other":
                continue
            li = lat.class_index(L)
            c = [0] * k
            if kind == "Cp_odd":
                c[li] += 1
                c[hi] -= 1
                mod = 2
            elif kind in ("C4", "Q8"):
                # the unique subgroup of order 2 in H/L (the centre for Q8)
                mids = [S for S in subs_of_H if S & L == L and popcount(S) == 2 * popcount(L)
                        and G.is_normal(L, S)]
                if len(mids) != 1:
                    raise GroupError("expected a unique order-2 subquotient")
                c[li] += 1
                c[lat.class_index(mids[0])] -= 1
                mod = 2 if kind == "C4" else 4
            else:
                p = G.prime
                mids = [S for S in subs_of_H if S & L == L and popcount(S) == p * popcount(L)]
                if len(mids) != p + 1:
                    raise GroupError("expected p+1 intermediate subgroups")
                c[li] += 1
                c[hi] -= 1
                for S in mids:
                    c[lat.class_index(S)] -= 1
                    c[hi] += 1
                mod = 0
            if not any(c):
                continue
            key = (tuple(c), mod)
            if key in seen:
                continue
            seen.add(key)
            out.append(Condition(kind, hi, li, tuple(c), mod))
    return out


def satisfies_borel_smith(f: SuperClassFunction) -> bool:
    return all(c.holds(f.values) for c in borel_smith_conditions(f.group))


@dataclass
class BorelSmithBasis:
    group: FiniteGroup
    lattice: IntLattice
    conditions: list

    @property
    def rank(self) -> int:
        return len(self.lattice.basis)

    @property
    def basis(self) -> list:
        return self.lattice.basis

    def contains(self, f: SuperClassFunction) -> bool:
        return self.lattice.contains(f.values)

    def to_json(self) -> dict:
        return {"group": _gname(self.group), "rank": self.rank,
                "basis": [list(r) for r in self.basis],
                "conditions": [c.to_json() for c in self.conditions]}


def _gname(G):
    return getattr(G, "spec", None) or G.name


def borel_smith_lattice(G: FiniteGroup) -> BorelSmithBasis:
    """C_b(G) as an integer lattice in idempotent coordinates.

    Congruences c.f = 0 mod m get a slack variable t with c.f - m t = 0; the
    lattice is the projection of the integer kernel of the assembled system."""
    cached = getattr(G, "_borel_smith", None)
    if cached is not None:
        return cached
    k = len(G.lattice)
    conds = borel_smith_conditions(G)
    cong = [c for c in conds if c.modulus]
    rows = []
    for c in conds:
        row = list(c.coeffs) + [0] * len(cong)
        if c.modulus:
            row[k + cong.index(c)] = -c.modulus
        rows.append(row)
    if rows:
        kern = integer_kernel(rows)
        gens = [v[:k] for v in kern]
    else:
        gens = [[int(i == j) for j in range(k)] for i in range(k)]
    out = BorelSmithBasis(G, IntLattice(k, gens), conds)
    G._borel_smith = out
    return out


# ---------------------------------------------------------------------------
# the quotient C(G)/C_b(G)

@dataclass
class DadeGroupStructure:
    group: FiniteGroup
    quotient: LatticeQuotient

    @property
    def free_rank(self) -> int:
        return self.quotient.free_rank

    @property
    def invariant_factors(self) -> list:
        return self.quotient.invariant_factors

    @property
    def torsion(self) -> list:
        return self.quotient.torsion

    def describe(self) -> str:
        return self.quotient.describe()

    def to_json(self) -> dict:
        return {"group": _gname(self.group), "free_rank": self.free_rank,
                "torsion": self.torsion, "invariant_factors": self.invariant_factors,
                "description": self.describe()}


def dade_structure(G: FiniteGroup) -> DadeGroupStructure:
    cached = getattr(G, "_dade_structure", None)
    if cached is None:
        cached = DadeGroupStructure(G, lattice_quotient(borel_smith_lattice(G).lattice))
        G._dade_structure = cached
    return cached


@dataclass(frozen=True)
class DadeElement:
    group: FiniteGroup = field(compare=False, hash=False)
    rep: tuple

    def is_zero(self) -> bool:
        return not any(self.rep)

    def __add__(self, other: "DadeElement") -> "DadeElement":
        return psi(SuperClassFunction(self.group, [a + b for a, b in zip(self.rep, other.rep)]))

    def __neg__(self):
        return psi(SuperClassFunction(self.group, [-a for a in self.rep]))

    def to_json(self) -> dict:
        return {"group": _gname(self.group), "representative": list(self.rep),
                "zero": self.is_zero()}


def psi(f: SuperClassFunction) -> DadeElement:
    """The coset f + C_b(G), by its canonical representative."""
    Q = dade_structure(f.group).quotient
    return DadeElement(f.group, Q.reduce(f.values))


def dade_zero(G: FiniteGroup) -> DadeElement:
    return DadeElement(G, tuple([0] * len(G.lattice)))


def omega_syzygy(X: GSet) -> DadeElement:
    """Omega_X = Psi(omega_X)."""
    return psi(omega(X))


# ---------------------------------------------------------------------------
# tensor induction

def _sub_index(G: FiniteGroup, K: int):
    Kg, emb = G.subgroup_group(K)
    return Kg, {x: i for i, x in enumerate(emb)}


def tensor_induction_formula(H: FiniteGroup, K: int, X: GSet) -> SuperClassFunction:
    """sum over S <=_H T of mu_H(S,T) F(X,T) omega_{H/S}, with
    F(X,T) = #{h in T\\H/K : X^{T^h cap K} nonempty}, T^h = h^-1 T h.

    ``X`` is a set for the group ``H.subgroup_group(K)[0]``."""
    lat = H.lattice
    k = len(lat)
    _, pos = _sub_index(H, K)
    F = []
    for T in lat.reps:
        count = 0
        for h in double_cosets(H, T, K):
            Th = H.conjugate_bits(H.inv[h], T)
            inter = bits_of(pos[x] for x in members(Th & K))
            if fixed_points(X, inter):
                count += 1
        F.append(count)
    mu = lat.mobius
    coords = [sum(mu[S][T] * F[T] for T in range(S, k) if lat.leq[S][T]) for S in range(k)]
    return from_omega_coordinates(H, coords)


def tensor_induction_check(H: FiniteGroup, K: int) -> dict:
    """For every K/J: Jnd_K^H omega_{K/J} against the explicit formula; and
    Jnd_K^H of the Borel-Smith basis of K lands in C_b(H)."""
    U = induction_biset(H, K)
    Kg = U.K
    cases = []
    for j, J in enumerate(Kg.lattice.reps):
        X = transitive_gset(Kg, J)
        via_jnd = jnd(U, omega(X))
        via_formula = tensor_induction_formula(H, K, X)
        cases.append({"J": j, "jnd": list(via_jnd.values), "formula": list(via_formula.values),
                      "status": "pass" if via_jnd == via_formula else "fail"})
    bsH = borel_smith_lattice(H)
    cb_cases = []
    for b in borel_smith_lattice(Kg).basis:
        img = jnd(U, SuperClassFunction(Kg, b))
        ok = bsH.contains(img)
        cb_cases.append({"basis_vector": list(b), "image": list(img.values),
                         "status": "pass" if ok else "fail"})
    ok = all(c["status"] == "pass" for c in cases + cb_cases)
    return {"H": _gname(H), "K": members(K), "index": H.order // popcount(K),
            "status": "pass" if ok else "fail", "transitive_cases": cases,
            "borel_smith_cases": cb_cases}


# ---------------------------------------------------------------------------
# Moore posets

def _report(X, p, report):
    return report if report is not None else analyze(X, p)


def hom_of_moore(X, p: int | None = None, report: MooreReport | None = None) -> DadeElement:
    """Psi(Dim X): the class of the reduced homology module."""
    rep = _report(X, p, report)
    if not rep.is_moore:
        raise GroupError("not a Moore G-space")
    if not rep.is_capped:
        raise GroupError("not capped: X^G has no reduced homology")
    return psi(rep.dim_function)


def tight_formula(X, p: int | None = None, report: MooreReport | None = None,
                  demo: bool = False) -> DadeElement:
    """sum_{i=m+1}^{n} Omega_{X_i} over the cell G-sets, m = n(G), n = n(1).

    Refuses non-tight input unless ``demo`` is set."""
    rep = report if report is not None and report.cells is not None else analyze(X, p)
    if not rep.is_moore:
        raise GroupError("not a Moore G-space")
    if not demo:
        if not rep.is_tight:
            raise GroupError("not tight: some fixed set has dimension above n(H)")
        if not rep.is_capped:
            raise GroupError("not capped")
    m = rep.entries[-1].n
    n = rep.entries[0].n
    G = rep.group
    total = dade_zero(G)
    for i in range(m + 1, n + 1):
        if i < len(rep.cells):
            total = total + omega_syzygy(rep.cells[i])
    return total


# ---------------------------------------------------------------------------
# representation-sphere dimension functions (oracle for membership in C_b)

def abelian_real_irreducible_dims(G: FiniteGroup) -> list[dict]:
    """For abelian G: one dimension function per kernel K with G/K cyclic.

    A real irreducible with kernel K has fixed space V^H = V if H <= K and 0
    otherwise, of real dimension 1 when |G/K| <= 2 and 2 otherwise."""
    if not G.is_abelian():
        raise GroupError("group is not abelian")
    lat = G.lattice
    out = []
    for ki, K in enumerate(lat.reps):
        if not _cyclic_quotient(G, K):
            continue
        d = 1 if G.order // popcount(K) <= 2 else 2
        vals = [d if H & ~K == 0 else 0 for H in lat.reps]
        out.append({"kernel": ki, "dim": d, "values": vals})
    return out


def _cyclic_quotient(G: FiniteGroup, K: int, inside: int | None = None) -> bool:
    """Is inside/K cyclic (inside defaults to G; K normal in it)?"""
    inside = G.all_bits if inside is None else inside
    idx = popcount(inside) // popcount(K)
    for g in members(inside):
        if popcount(G.closure([g], start=K)) == idx * popcount(K):
            return True
    return False


def monomial_dims(G: FiniteGroup) -> list[dict]:
    """Dimension functions of Ind_K^G of realified linear characters of K with kernel K'.

    dim (Ind V)^H = d * #{H g K : K cap g^-1 H g <= K'}, d = 1 if |K/K'| <= 2 else 2."""
    lat = G.lattice
    out = []
    for ki, K in enumerate(lat.reps):
        for Kp in lat.subgroups:
            if Kp & ~K or not G.is_normal(Kp, K) or not _cyclic_quotient(G, Kp, K):
                continue
            d = 1 if popcount(K) // popcount(Kp) <= 2 else 2
            vals = []
            for H in lat.reps:
                c = 0
                for g in double_cosets(G, H, K):
                    if (K & G.conjugate_bits(G.inv[g], H)) & ~Kp == 0:
                        c += 1
                vals.append(d * c)
            out.append({"K": ki, "kernel": members(Kp), "dim": vals[0], "values": vals})
    return out


def borel_smith_oracle(G: FiniteGroup) -> dict:
    """Every tabulated representation-sphere dimension function must lie in C_b(G).

    For abelian groups the real irreducibles must moreover span C_b exactly."""
    bs = borel_smith_lattice(G)
    k = len(G.lattice)
    cases = []
    fams = monomial_dims(G)
    if G.is_abelian():
        fams = abelian_real_irreducible_dims(G) + fams
    for f in fams:
        ok = bs.lattice.contains(f["values"])
        cases.append({**f, "status": "pass" if ok else "fail"})
    span = IntLattice(k, [f["values"] for f in fams])
    span_q = _index_in(span, bs.lattice, k)
    result = {"group": _gname(G), "cases": cases, "span_index_in_cb": span_q}
    if G.is_abelian():
        result["span_equals_cb"] = span_q == 1
    ok = all(c["status"] == "pass" for c in cases) and result.get("span_equals_cb", True)
    result["status"] = "pass" if ok else "fail"
    return result


def _index_in(small: IntLattice, big: IntLattice, k: int):
    """[big : small] when small is a sublattice of big of the same rank, else None.

    The index squared is the ratio of Gram determinants."""
    if len(small.basis) != len(big.basis):
        return None
    if not all(big.contains(v) for v in small.basis):
        return None
    q2, r = divmod(_gram_det(small.basis), _gram_det(big.basis))
    q = isqrt(q2)
    return q if r == 0 and q * q == q2 else None


def _gram_det(rows) -> int:
    return det([[sum(a * b for a, b in zip(u, v)) for v in rows] for u in rows])


def structure_report(G: FiniteGroup) -> dict:
    """dade_structure with its release checks; outputs are withheld if any check fails."""
    from math import prod
    from .xalg import torsion_order_by_minors
    s = dade_structure(G)
    oracle = borel_smith_oracle(G)
    basis = borel_smith_lattice(G).basis
    minors = torsion_order_by_minors(basis)
    checks = [
        {"name": "borel-smith-oracle", "status": oracle["status"],
         "witness": [c for c in oracle["cases"] if c["status"] != "pass"] or None},
        {"name": "torsion-order-by-minors", "status": _ok(prod(s.torsion) == minors),
         "witness": {"product_of_torsion": prod(s.torsion), "gcd_of_maximal_minors": minors}},
        {"name": "rank", "status": _ok(s.free_rank == len(G.lattice) - len(basis)),
         "witness": {"classes": len(G.lattice), "rank_cb": len(basis)}},
    ]
    released = all(c["status"] == "pass" for c in checks)
    out = {"group": _gname(G), "free_rank": s.free_rank if released else None,
           "torsion": s.torsion if released else None,
           "invariant_factors": s.invariant_factors if released else None,
           "description": s.describe() if released else None,
           "status": "pass" if released else "blocked", "checks": checks}
    return out


def _ok(b: bool) -> str:
    return "pass" if b else "fail"
