"""Verification sweeps over the group catalog.

Every suite produces cases keyed by plain data; cases can be evaluated in a
process pool and the report is assembled in sorted key order."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .biset import induction_biset
from .cfun import (SuperClassFunction, from_omega_coordinates, idempotent_basis, jnd,
                   omega_basis, to_omega_coordinates)
from .dade import (borel_smith_oracle, hom_of_moore, tensor_induction_check,
                   tensor_induction_formula, tight_formula)
from .grp import DEFAULT_CATALOG, build_group, popcount
from .gposet import (JoinInduction, SizeCapError, cone, discrete_poset, fixed_point_certificate, jn_U, join,
                     point_poset)
from .gset import transitive_gset
from .moore import analyze, dimsum_check

SUITES = ["mobius-basis", "tensor-induction", "fixed-points", "dim-functoriality",
          "tight-formula", "borel-smith-oracle"]


@dataclass
class VerificationReport:
    suite: str
    cases: list = field(default_factory=list)
    wall_time: float = 0.0
    excluded: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped-by-cap": 0}
        for c in self.cases:
            out[c["status"]] += 1
        out["total"] = len(self.cases)
        return out

    @property
    def ok(self) -> bool:
        return all(c["status"] != "fail" for c in self.cases)

    def to_json(self, timing: bool = False) -> dict:
        d = {"suite": self.suite, "summary": self.summary, "cases": self.cases}
        if self.excluded:
            d["excluded"] = self.excluded
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d


# ---------------------------------------------------------------------------
# groups (rebuilt per worker; optional fault injection)

@lru_cache(maxsize=None)
def group(spec: str, fault: str | None = None):
    G = build_group(spec)
    if fault == "mobius":
        corrupt_mobius(G)
    return G


def corrupt_mobius(G):
    """Test hook: perturb one entry of the Moebius table."""
    lat = G.lattice
    if len(lat) > 1:
        lat.mobius[0][len(lat) - 1] += 1


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# Moebius / basis suite

def mobius_case(spec, fault=None) -> dict:
    G = group(spec, fault)
    lat = G.lattice
    k = len(lat)
    zeta = [[int(lat.leq[i][j]) for j in range(k)] for i in range(k)]
    mu = lat.mobius
    ident = [[int(i == j) for j in range(k)] for i in range(k)]
    left = [[sum(mu[i][t] * zeta[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
    right = [[sum(zeta[i][t] * mu[t][j] for t in range(k)) for j in range(k)] for i in range(k)]
    # independent recursion from the top: mu(S,T) = -sum_{S < U <= T} mu(U,T)
    mu2 = [[0] * k for _ in range(k)]
    for T in range(k):
        mu2[T][T] = 1
        for S in range(T - 1, -1, -1):
            if lat.leq[S][T]:
                mu2[S][T] = -sum(mu2[U][T] for U in range(S + 1, T + 1) if lat.leq[S][U] and lat.leq[U][T])
    trips = all(from_omega_coordinates(G, to_omega_coordinates(e)) == e for e in idempotent_basis(G))
    units = all(to_omega_coordinates(w) == [int(i == j) for j in range(k)]
                for i, w in enumerate(omega_basis(G)))
    rng = random.Random(f"{spec}-mobius")
    rand = all(from_omega_coordinates(G, to_omega_coordinates(f)) == f
               for f in (SuperClassFunction(G, [rng.randint(-9, 9) for _ in range(k)])
                         for _ in range(20)))
    checks = {"mu_zeta": left == ident, "zeta_mu": right == ident,
              "mu_two_recursions": [list(r) for r in mu] == mu2,
              "e_roundtrip": trips, "omega_units": units, "random_roundtrip": rand}
    return {"key": [spec], "inputs": {"group": spec, "classes": k},
            "expected": "all identities hold", "got": checks, "status": _status(all(checks.values()))}


# ---------------------------------------------------------------------------
# tensor induction suite

def tensor_cases(specs, max_index):
    keys = []
    for spec in specs:
        G = group(spec)
        for ki, K in enumerate(G.lattice.reps):
            if G.order // popcount(K) <= max_index:
                keys.append((spec, ki))
    return keys


def tensor_case(spec, ki, fault=None) -> dict:
    G = group(spec, fault)
    rep = tensor_induction_check(G, G.lattice.reps[ki])
    return {"key": [spec, ki], "inputs": {"group": spec, "K": ki, "index": rep["index"]},
            "expected": "Jnd equals the double-coset formula; C_b(K) maps into C_b(H)",
            "got": {"transitive_cases": rep["transitive_cases"],
                    "borel_smith_cases": len(rep["borel_smith_cases"]),
                    "borel_smith_failures": [c for c in rep["borel_smith_cases"]
                                             if c["status"] != "pass"]},
            "status": rep["status"]}


def anchor_case(p: int, fault=None) -> dict:
    """K = 1 <= C_p, X = point: (p-1) omega_{H/1} + omega_{H/H} = (p, 1)."""
    spec = f"C{p}"
    G = group(spec, fault)
    K = group("1")
    f = tensor_induction_formula(G, G.trivial_bits, transitive_gset(K, K.all_bits))
    j = jnd(induction_biset(G, G.trivial_bits), SuperClassFunction(K, [1]))
    want = [p, 1]
    ok = list(f.values) == want and list(j.values) == want
    return {"key": [spec, "anchor"], "inputs": {"group": spec, "K": "1", "X": "point"},
            "expected": want, "got": {"formula": list(f.values), "jnd": list(j.values)},
            "status": _status(ok)}


# ---------------------------------------------------------------------------
# poset corpus

def corpus(K) -> list[tuple[str, object]]:
    """Small K-posets: antichains K/J with |K/J| <= 4, their cones, and point * point."""
    out = []
    lat = K.lattice
    for j, J in enumerate(lat.reps):
        if K.order // popcount(J) <= 4:
            X = discrete_poset(transitive_gset(K, J))
            out.append((f"K/J{j}", X))
            out.append((f"c(K/J{j})", cone(X)))
    out.append(("pt*pt", join(point_poset(K), point_poset(K))))
    return out


def induction_keys(specs, max_index):
    keys = []
    for spec in specs:
        G = group(spec)
        for ki, K in enumerate(G.lattice.reps):
            if G.order // popcount(K) <= max_index:
                Kg, _ = G.subgroup_group(K)
                for name, _ in corpus(Kg):
                    keys.append((spec, ki, name))
    return keys


def _setup(spec, ki, name, fault=None):
    G = group(spec, fault)
    U = induction_biset(G, G.lattice.reps[ki])
    X = dict(corpus(U.K))[name]
    return G, U, X


def fixed_point_case(spec, ki, name, fault=None) -> dict:
    G, U, X = _setup(spec, ki, name, fault)
    inputs = {"group": spec, "K": ki, "X": name, "index": G.order // U.K.order}
    try:
        per_L = []
        ji = JoinInduction(U, X)
        for li, L in enumerate(G.lattice.reps):
            cert = fixed_point_certificate(U, X, L, ji)
            per_L.append({"L": li, **cert})
    except SizeCapError as e:
        return {"key": [spec, ki, name], "inputs": inputs, "expected": "isomorphic",
                "got": str(e), "status": "skipped-by-cap"}
    ok = all(c["explicit_map"] and c["isomorphic"] for c in per_L)
    return {"key": [spec, ki, name], "inputs": inputs,
            "expected": "(jn_U X)^L isomorphic to the join of X^{L^u} for every L",
            "got": per_L, "status": _status(ok)}


def dim_case(spec, ki, name, fault=None) -> list[dict]:
    """Dim(jn_U X) = Jnd_U(Dim X), and the homology-dimension shadow of tensor induction."""
    G, U, X = _setup(spec, ki, name, fault)
    index = G.order // U.K.order
    inputs = {"group": spec, "K": ki, "X": name, "index": index}
    try:
        J = jn_U(U, X)
        rj = analyze(J, G.prime, cells=False)
        rx = analyze(X, G.prime, cells=False)
    except SizeCapError as e:
        skip = {"inputs": inputs, "expected": None, "got": str(e), "status": "skipped-by-cap"}
        return [{"key": [spec, ki, name, "dim"], **skip}, {"key": [spec, ki, name, "shadow"], **skip}]
    dx = rx.dim_function
    dj = rj.dim_function
    want = jnd(U, dx) if dx is not None else None
    ok = dj is not None and want is not None and dj == want
    dim = {"key": [spec, ki, name, "dim"], "inputs": inputs,
           "expected": list(want.values) if want is not None else None,
           "got": list(dj.values) if dj is not None else None, "status": _status(ok)}
    hx = sum(rx.entries[0].betti)
    hj = sum(rj.entries[0].betti)
    shadow = {"key": [spec, ki, name, "shadow"], "inputs": inputs,
              "expected": hx ** index, "got": hj, "status": _status(hj == hx ** index)}
    return [dim, shadow]


def join_pairs(specs):
    keys = []
    for spec in specs:
        G = group(spec)
        names = [n for n, _ in corpus(G)]
        for i, a in enumerate(names):
            for b in names[i:]:
                keys.append((spec, a, b))
    return keys


def join_case(spec, a, b, fault=None) -> dict:
    """Dim(X * Y) = Dim X + Dim Y for Moore X, Y without acyclic fixed sets."""
    G = group(spec, fault)
    posets = dict(corpus(G))
    X, Y = posets[a], posets[b]
    rx, ry = analyze(X, G.prime, cells=False), analyze(Y, G.prime, cells=False)
    inputs = {"group": spec, "X": a, "Y": b}
    if rx.acyclic_classes or ry.acyclic_classes:
        return {"excluded": True, "key": [spec, a, b, "join"],
                "reason": "a fixed set is nonempty and acyclic, outside the Moore convention"}
    rz = analyze(join(X, Y), G.prime, cells=False)
    want = rx.dim_function + ry.dim_function
    got = rz.dim_function
    return {"key": [spec, a, b, "join"], "inputs": inputs, "expected": list(want.values),
            "got": list(got.values) if got is not None else None,
            "status": _status(got == want)}


# ---------------------------------------------------------------------------
# tight formula suite

TIGHT_SIZE_CAP = 3000


def tight_keys(specs, max_index):
    keys = []
    for spec in specs:
        G = group(spec)
        k = len(G.lattice)
        for i in range(k):
            keys.append((spec, f"gset(G/H{i})"))
        for i in range(k):
            for j in range(i, k):
                keys.append((spec, f"union(gset(G/H{i}), gset(G/H{j}))"))
                keys.append((spec, f"join(gset(G/H{i}), gset(G/H{j}))"))
        for ki, K in enumerate(G.lattice.reps):
            if 1 < G.order // popcount(K) <= max_index:
                Kg, _ = G.subgroup_group(K)
                for j in range(len(Kg.lattice)):
                    keys.append((spec, f"induce({ki}, gset(G/H{j}))"))
    return keys


def tight_case(spec, expr, fault=None):
    from .builder import build_poset
    G = group(spec, fault)
    try:
        X = build_poset(expr, G)
        if X.size > TIGHT_SIZE_CAP:
            raise SizeCapError(f"{X.size} elements exceeds the tight-suite cap {TIGHT_SIZE_CAP}")
        rep = analyze(X, G.prime)
    except SizeCapError as e:
        return {"key": [spec, expr], "inputs": {"group": spec, "poset": expr},
                "expected": None, "got": str(e), "status": "skipped-by-cap"}
    flags = {"moore": rep.is_moore, "tight": rep.is_tight, "full": rep.is_full,
             "capped": rep.is_capped}
    if not all(flags.values()):
        return {"excluded": True, "key": [spec, expr],
                "reason": "not " + " and ".join(k for k, v in flags.items() if not v)}
    lhs = tight_formula(X, report=rep)
    rhs = hom_of_moore(X, report=rep)
    ds = dimsum_check(X, report=rep)
    ok = lhs == rhs and ds["status"] == "pass"
    return {"key": [spec, expr], "inputs": {"group": spec, "poset": expr, "size": X.size},
            "expected": {"hom_of_moore": list(rhs.rep), "dim": ds.get("dim")},
            "got": {"tight_formula": list(lhs.rep), "sum_of_omegas": ds.get("sum_of_omegas")},
            "status": _status(ok)}


# ---------------------------------------------------------------------------
# Borel-Smith oracle suite

def oracle_case(spec, fault=None) -> dict:
    G = group(spec, fault)
    r = borel_smith_oracle(G)
    return {"key": [spec], "inputs": {"group": spec, "abelian": G.is_abelian()},
            "expected": "every representation dimension function lies in C_b",
            "got": {"functions": len(r["cases"]),
                    "failures": [c for c in r["cases"] if c["status"] != "pass"],
                    "span_index_in_cb": r["span_index_in_cb"],
                    "span_equals_cb": r.get("span_equals_cb")},
            "status": r["status"]}


# ---------------------------------------------------------------------------
# driver

def _call(task):
    fn, args = task
    return fn(*args)


def _tasks(suite, specs, max_index, fault):
    if suite == "mobius-basis":
        return [(mobius_case, (s, fault)) for s in specs]
    if suite == "tensor-induction":
        tasks = [(tensor_case, (s, ki, fault)) for s, ki in tensor_cases(specs, max_index or 10**9)]
        for s in specs:
            G = group(s)
            if G.order == G.prime:
                tasks.append((anchor_case, (G.order, fault)))
        return tasks
    if suite == "fixed-points":
        return [(fixed_point_case, (*k, fault)) for k in induction_keys(specs, min(max_index or 4, 4))]
    if suite == "dim-functoriality":
        return ([(dim_case, (*k, fault)) for k in induction_keys(specs, min(max_index or 4, 4))]
                + [(join_case, (*k, fault)) for k in join_pairs(specs)])
    if suite == "tight-formula":
        return [(tight_case, (*k, fault)) for k in tight_keys(specs, min(max_index or 4, 4))]
    if suite == "borel-smith-oracle":
        return [(oracle_case, (s, fault)) for s in specs]
    raise ValueError(f"unknown suite {suite!r}")


def run_suite(suite: str, specs=None, max_index: int | None = None, threads: int = 1,
              fault: str | None = None) -> VerificationReport:
    specs = list(specs) if specs else list(DEFAULT_CATALOG)
    t0 = time.perf_counter()
    tasks = _tasks(suite, specs, max_index, fault)
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_call, tasks, chunksize=1))
    else:
        results = [_call(t) for t in tasks]
    cases, excluded = [], []
    for r in results:
        for c in (r if isinstance(r, list) else [r]):
            if c.get("excluded"):
                excluded.append({"key": c["key"], "reason": c["reason"]})
            else:
                cases.append(c)
    cases.sort(key=lambda c: [str(x) for x in c["key"]])
    excluded.sort(key=lambda c: [str(x) for x in c["key"]])
    return VerificationReport(suite, cases, time.perf_counter() - t0, excluded)


def run_all(specs=None, max_index=None, threads=1, fault=None) -> list[VerificationReport]:
    return [run_suite(s, specs, max_index, threads, fault) for s in SUITES]
