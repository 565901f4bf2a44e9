"""Exact linear algebra: GF(p) rank/kernel, integer Hermite and Smith normal forms,
and quotients Z^r / L with canonical coset representatives.

Integer matrices are lists of lists of Python ints (arbitrary precision).
"""
from __future__ import annotations

from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# GF(p)

def rank_kernel_mod_p(M, p: int):
    """Rank and a kernel basis (list of vectors) of M over GF(p)."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [[x % p for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [(x - t * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in set(pivots)]
    kernel = []
    for fcol in free:
        v = [0] * cols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol] % p
        kernel.append(v)
    return r, kernel


def rank_mod_p_sparse(columns, p: int) -> int:
    """Rank over GF(p) of a matrix given as sparse columns ({row: coeff}).

    Column reduction keyed on the largest row index (the usual boundary-matrix sweep).
    """
    pivot_of = {}
    rank = 0
    for col in columns:
        c = {r: v % p for r, v in col.items() if v % p}
        while c:
            low = max(c)
            other = pivot_of.get(low)
            if other is None:
                inv = pow(c[low], -1, p)
                pivot_of[low] = {r: v * inv % p for r, v in c.items()}
                rank += 1
                break
            t = c[low]
            for r, v in other.items():
                nv = (c.get(r, 0) - t * v) % p
                if nv:
                    c[r] = nv
                else:
                    c.pop(r, None)
    return rank


def matmul_mod_p(A, B, p):
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*B)] for row in A]


# ---------------------------------------------------------------------------
# integer matrices

def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    if not B:
        return [[] for _ in A]
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def det(A) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def hermite_normal_form(rows, ncols: int | None = None):
    """Row-style HNF of the lattice spanned by ``rows``: echelon form, positive pivots,
    entries above each pivot reduced into [0, pivot). Zero rows dropped."""
    A = [list(r) for r in rows if any(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    out = []
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r..
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    out = [row for row in A[:r] if any(row)]
    return out


def smith_normal_form(M):
    """(D, U, V) with U M V = D, U and V unimodular, D diagonal with d_i | d_{i+1}."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        changed = True
            if changed:
                nz = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                nz += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(nz)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: pull a non-divisible entry into row t
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def invariant_factors(M) -> list[int]:
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def integer_kernel(M, ncols: int | None = None):
    """Basis (rows) of {x in Z^n : M x = 0}."""
    if not M:
        n = ncols or 0
        return identity(n)
    n = len(M[0])
    D, _, V = smith_normal_form(M)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


# ---------------------------------------------------------------------------
# lattices and quotients

@dataclass
class IntLattice:
    """Sublattice of Z^rank spanned by ``generators``; ``basis`` is its HNF."""
    rank: int
    generators: list
    basis: list = field(init=False)

    def __post_init__(self):
        self.basis = hermite_normal_form(self.generators, self.rank)

    def contains(self, v) -> bool:
        return not any(reduce_mod_hnf(v, self.basis))


def reduce_mod_hnf(v, hnf):
    """Canonical representative of v + L for the HNF basis of L."""
    v = list(v)
    for row in hnf:
        c = next(j for j, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


@dataclass
class LatticeQuotient:
    """Z^r / L = Z^free_rank + sum Z/d_i."""
    rank: int
    free_rank: int
    invariant_factors: list
    hnf: list

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def reduce(self, v) -> tuple:
        return tuple(reduce_mod_hnf(v, self.hnf))

    def describe(self) -> str:
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def lattice_quotient(L: IntLattice) -> LatticeQuotient:
    r = L.rank
    if not L.basis:
        return LatticeQuotient(r, r, [], [])
    facs = invariant_factors(L.basis)
    return LatticeQuotient(r, r - len(facs), facs, L.basis)


def determinantal_divisors_factors(M) -> list[int]:
    """Invariant factors from gcds of k x k minors (slow; independent of elimination)."""
    from itertools import combinations
    from math import gcd
    m = len(M)
    n = len(M[0]) if m else 0
    divs = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, det([[M[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        divs.append(g)
    return [divs[i] // divs[i - 1] for i in range(1, len(divs))]


def torsion_order_by_minors(basis) -> int:
    """gcd of the maximal minors of a full-row-rank basis: the order of the torsion
    part of Z^r / L, computed without any elimination of L itself."""
    from itertools import combinations
    from math import gcd
    k = len(basis)
    if k == 0:
        return 1
    g = 0
    for cs in combinations(range(len(basis[0])), k):
        g = gcd(g, det([[row[j] for j in cs] for row in basis]))
    return abs(g)
