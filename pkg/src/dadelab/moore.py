"""Reduced homology over GF(p) of flag complexes and their fixed subcomplexes;
Moore / tight / full / capped classification and dimension functions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cfun import SuperClassFunction
from .grp import GroupError, members
from .gposet import FlagComplex, GPoset, fixed_subposet, flag_complex, fullness_witness
from .gset import omega
from .xalg import rank_mod_p_sparse


class NotMooreError(GroupError):
    pass


class ChainComplexFp:
    """Augmented chain complex of a flag complex: C_{-1} = k, d_0 is the augmentation.

    ``boundary[d]`` holds the sparse columns of d_d : C_d -> C_{d-1} for d >= 0."""

    def __init__(self, F: FlagComplex, p: int):
        self.p = p
        self.dims = [1] + F.f_vector()  # dims[d+1] = dim C_d
        self.boundary = []
        if F.simplices:
            self.boundary.append([{0: 1} for _ in F.simplices[0]])
        for d in range(1, len(F.simplices)):
            faces = F.index[d - 1]
            cols = []
            for s in F.simplices[d]:
                col = {}
                for i in range(d + 1):
                    col[faces[s[:i] + s[i + 1:]]] = (-1) ** i
                cols.append(col)
            self.boundary.append(cols)

    def check_dd(self) -> bool:
        """d_{d} d_{d+1} = 0 over the integers."""
        for d in range(len(self.boundary) - 1):
            lower = self.boundary[d]
            for col in self.boundary[d + 1]:
                acc = {}
                for r, v in col.items():
                    for r2, w in lower[r].items():
                        acc[r2] = acc.get(r2, 0) + v * w
                if any(acc.values()):
                    return False
        return True

    def betti(self) -> list[int]:
        """Reduced Betti numbers for degrees -1 .. top."""
        ranks = [rank_mod_p_sparse(cols, self.p) for cols in self.boundary] + [0]
        out = [self.dims[0] - ranks[0]] if self.boundary else [1]
        for d in range(len(self.boundary)):
            out.append(self.dims[d + 1] - ranks[d] - ranks[d + 1])
        return out


def core(P: GPoset) -> GPoset:
    """Remove beat points (one upper cover or one lower cover) until none remain.

    The order complex keeps its homotopy type, so homology can be taken of the core."""
    alive = set(range(P.size))
    up = list(P.up)
    down = P.down()
    changed = True
    while changed:
        changed = False
        for x in sorted(alive):
            mask = _mask(alive)
            above = up[x] & mask
            below = down[x] & mask
            if _single_min(above, up, mask) or _single_max(below, down, mask):
                alive.discard(x)
                changed = True
    return P.induced(sorted(alive))


def _mask(alive) -> int:
    b = 0
    for x in alive:
        b |= 1 << x
    return b


def _single_min(above, up, mask) -> bool:
    """The set ``above`` is nonempty and has a least element."""
    if not above:
        return False
    return any((up[y] & mask) | 1 << y == above for y in members(above))


def _single_max(below, down, mask) -> bool:
    if not below:
        return False
    return any((down[y] & mask) | 1 << y == below for y in members(below))


def reduced_betti(P, p: int, reduce: bool = True) -> list[int]:
    """Reduced Betti numbers over GF(p) of the flag complex of P (degrees -1 ..).

    ``P`` may be a poset or a flag complex. The empty complex gives [1]."""
    if isinstance(P, FlagComplex):
        F = P
    else:
        F = flag_complex(core(P) if reduce else P)
    b = ChainComplexFp(F, p).betti()
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    return b


@dataclass
class ClassEntry:
    index: int
    name: str
    order: int
    fixed_size: int
    dim: int
    betti: list
    n: int | None
    acyclic: bool

    def to_json(self) -> dict:
        return {"class": self.index, "name": self.name, "order": self.order,
                "fixed_size": self.fixed_size, "dim": self.dim,
                "betti_from_degree_-1": self.betti, "n": self.n, "acyclic": self.acyclic}


@dataclass
class MooreReport:
    group: object
    p: int
    entries: list
    is_moore: bool
    is_tight: bool
    is_capped: bool
    is_full: bool | None = None
    cell_orbits: list | None = None
    cells: list | None = field(default=None, repr=False)

    @property
    def dim_function(self) -> SuperClassFunction | None:
        if not self.is_moore:
            return None
        return SuperClassFunction(self.group, [e.n + 1 for e in self.entries])

    @property
    def acyclic_classes(self) -> list[int]:
        return [e.index for e in self.entries if e.acyclic]

    def to_json(self) -> dict:
        G = self.group
        dim = self.dim_function
        return {"group": getattr(G, "spec", None) or G.name, "p": self.p,
                "is_moore": self.is_moore, "is_tight": self.is_tight,
                "is_full": self.is_full, "is_capped": self.is_capped,
                "acyclic_classes": self.acyclic_classes,
                "dim_function": list(dim.values) if dim is not None else None,
                "classes": [e.to_json() for e in self.entries],
                "cell_orbits": self.cell_orbits}


def analyze(X: GPoset, p: int | None = None, cells: bool = True, reduce: bool = True) -> MooreReport:
    """Per-class reduced homology of the fixed flag complexes and the Moore flags.

    A nonempty fixed set with no reduced homology is recorded with n = -1 and the
    ``acyclic`` flag; it still counts as Moore."""
    G = X.group
    if p is None:
        p = G.prime
    if p is None:
        raise GroupError("a prime is needed for the trivial group")
    if G.prime is not None and G.prime != p:
        raise GroupError(f"|G| = {G.order} is not a power of {p}")
    lat = G.lattice
    entries = []
    for i, H in enumerate(lat.reps):
        FX = fixed_subposet(X, H)
        b = reduced_betti(FX, p, reduce=reduce)
        nonzero = [d - 1 for d, v in enumerate(b) if v]
        acyclic = not nonzero
        n = nonzero[0] if len(nonzero) == 1 else (-1 if acyclic else None)
        entries.append(ClassEntry(i, lat.name(i), lat.order_of(i), FX.size, FX.height(),
                                  b, n, acyclic))
    is_moore = all(e.n is not None for e in entries)
    is_tight = is_moore and all(e.dim == e.n for e in entries)
    top = entries[-1]
    is_capped = any(top.betti)
    rep = MooreReport(G, p, entries, is_moore, is_tight, is_capped)
    if cells:
        cs = flag_complex(X).cell_gsets()
        rep.cells = cs
        rep.is_full = fullness_witness(cs, G) is None
        rep.cell_orbits = [_orbit_summary(C) for C in cs]
    return rep


def _orbit_summary(C) -> dict:
    from .gset import stabilizer_classes
    sc = stabilizer_classes(C)
    return {"points": C.size, "orbit_types": {str(k): v for k, v in sorted(sc.items())}}


def dim_function(report: MooreReport) -> SuperClassFunction:
    if not report.is_moore:
        raise NotMooreError("not a Moore G-space: some fixed set has homology in two degrees")
    return report.dim_function


def dimsum_check(X: GPoset, p: int | None = None, report: MooreReport | None = None) -> dict:
    """Dim X = sum_i omega_{X_i} for tight full Moore posets."""
    rep = report if report is not None and report.cells is not None else analyze(X, p)
    if not (rep.is_moore and rep.is_tight and rep.is_full):
        return {"status": "inapplicable", "is_moore": rep.is_moore,
                "is_tight": rep.is_tight, "is_full": rep.is_full}
    G = X.group
    total = SuperClassFunction(G, [0] * len(G.lattice))
    for C in rep.cells:
        total = total + omega(C)
    dim = rep.dim_function
    return {"status": "pass" if total == dim else "fail",
            "dim": list(dim.values), "sum_of_omegas": list(total.values)}

