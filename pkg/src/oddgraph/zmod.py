"""Exact linear algebra over Z, Z_r and GF(2).

Solutions of ``M x = b (mod r)`` for composite ``r`` go through the Smith
normal form of ``M`` over the integers; GF(2) systems use bitset rows.
Residues are canonical representatives ``0..r-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == S`` with U, V unimodular and S in Smith normal form.

    All three are object-dtype arrays holding Python ints.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        k = min(self.S.shape)
        return [int(self.S[i, i]) for i in range(k)]


@dataclass(frozen=True)
class ModSolution:
    modulus: int
    particular: np.ndarray
    kernel_basis: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class Gf2Solution:
    solution: np.ndarray
    kernel_basis: tuple[np.ndarray, ...]


def _as_int_rows(M) -> list[list[int]]:
    rows = [[int(v) for v in row] for row in M]
    if not rows or not rows[0]:
        raise ValueError("matrix must be nonempty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("ragged matrix")
    return rows


def smith_normal_form(M) -> SnfDecomposition:
    """Smith normal form with deterministic pivoting.

    Pivot: smallest nonzero absolute value in the active submatrix, ties
    broken by lowest row then lowest column.
    """
    A = _as_int_rows(M)
    m, n = len(A), len(A[0])
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = row[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                return _finish(A, U, V)
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                A[t] = [-a for a in A[t]]
                U[t] = [-a for a in U[t]]
            break
    return _finish(A, U, V)


def _finish(A, U, V) -> SnfDecomposition:
    def arr(rows):
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    return SnfDecomposition(arr(U), arr(A), arr(V))


def _unit_multiplier(a: int, g: int, r: int) -> int:
    """A unit ``u`` of Z_r with ``a*u = g (mod r)`` where ``g = gcd(a, r)``."""
    rg = r // g
    u0 = pow(a // g, -1, rg) if rg > 1 else 0
    for k in range(g + 1):
        u = u0 + k * rg
        if gcd(u, r) == 1:
            return u % r
    raise ArithmeticError("no unit lift found")  # unreachable for g = gcd(a, r)


def _compress_rows(M: np.ndarray, b: np.ndarray, r: int):
    """Row-echelon reduction of ``[M | b]`` over Z_r.

    Uses only operations invertible mod r, so the solution set mod r is
    unchanged. Returns ``(M', b')`` with at most ``n`` rows, or ``None``
    when a zero row carries a nonzero right-hand side.
    """
    A = np.concatenate([M % r, (b % r)[:, None]], axis=1).astype(np.int64)
    m, n = M.shape
    piv = 0
    for col in range(n):
        if piv == m:
            break
        while True:
            nz = np.flatnonzero(A[piv:, col]) + piv
            if nz.size == 0:
                break
            col_vals = A[nz, col]
            gs = np.gcd(col_vals, r)
            g0 = int(np.gcd.reduce(np.append(gs, r)))
            hit = np.flatnonzero(gs == g0)
            if hit.size:
                i = int(nz[hit[0]])
                u = _unit_multiplier(int(A[i, col]), g0, r)
                A[i] = (A[i] * u) % r
                if i != piv:
                    A[[piv, i]] = A[[i, piv]]
                rest = np.flatnonzero(A[piv + 1 :, col]) + piv + 1
                if rest.size:
                    q = A[rest, col] // g0
                    A[rest] = (A[rest] - q[:, None] * A[piv]) % r
                piv += 1
                break
            # no single row attains the column gcd: merge the two smallest
            order = np.argsort(gs, kind="stable")
            i, j = int(nz[order[0]]), int(nz[order[1]])
            a, c = int(A[i, col]), int(A[j, col])
            g, s, t = _ext_gcd(a, c)
            ri, rj = A[i].copy(), A[j].copy()
            A[i] = (s * ri + t * rj) % r
            A[j] = ((c // g) * ri - (a // g) * rj) % r
    if np.any(A[piv:, n] % r):
        return None
    return A[:piv, :n], A[:piv, n]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def solve_mod(M, b: Sequence[int], modulus: int) -> ModSolution | None:
    """Solve ``M x = b (mod modulus)``; ``None`` when the system has no solution."""
    r = int(modulus)
    if r < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    M = np.asarray(_as_int_rows(M), dtype=np.int64)
    b = np.asarray([int(v) for v in b], dtype=np.int64)
    m, n = M.shape
    if b.shape != (m,):
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {m}")
    if m > n:
        packed = _compress_rows(M, b, r)
        if packed is None:
            return None
        M, b = packed
    else:
        M, b = M % r, b % r
    if M.shape[0] == 0 or not M.any():
        if np.any(b % r):
            return None
        basis = tuple(np.eye(n, dtype=np.int64)[i] for i in range(n))
        return ModSolution(r, np.zeros(n, dtype=np.int64), basis)

    snf = smith_normal_form(M)
    c = [int(v) % r for v in snf.U.dot(np.asarray(b, dtype=object))]
    diag = snf.diagonal
    y = [0] * n
    steps = [1] * n
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        g = gcd(d, r)
        if ci % g:
            return None
        if i >= n:
            continue
        rg = r // g
        y[i] = (ci // g) * pow(d // g, -1, rg) % rg if rg > 1 else 0
        steps[i] = rg
    V = snf.V
    x = np.array([int(v) % r for v in V.dot(np.asarray(y, dtype=object))], dtype=np.int64)
    kernel = []
    for i in range(n):
        if steps[i] % r == 0:
            continue
        k = np.array([int(v) * steps[i] % r for v in V[:, i]], dtype=np.int64)
        if k.any():
            kernel.append(k)
    return ModSolution(r, x, tuple(kernel))


def _to_bitrows(M, b) -> tuple[list[int], int]:
    rows = [[int(v) & 1 for v in row] for row in M]
    n = len(rows[0]) if rows else 0
    bits = []
    for row, rhs in zip(rows, b):
        word = 0
        for j, v in enumerate(row):
            if v:
                word |= 1 << j
        if int(rhs) & 1:
            word |= 1 << n
        bits.append(word)
    return bits, n


def gf2_solve(M, b: Sequence[int], n_cols: int | None = None) -> Gf2Solution | None:
    """Gaussian elimination over GF(2) with int-bitset rows.

    Returns a solution (free variables set to 0) and a nullspace basis, or
    ``None`` when the system is inconsistent.
    """
    M = list(M)
    if len(M) != len(b):
        raise ValueError("row count of M and length of b differ")
    rows, n = _to_bitrows(M, b)
    if not rows:
        n = n_cols or 0
    rhs_bit = 1 << n
    pivots: list[tuple[int, int]] = []  # (column, row index into work)
    work = rows[:]
    rank = 0
    for col in range(n):
        bit = 1 << col
        sel = next((i for i in range(rank, len(work)) if work[i] & bit), None)
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        pr = work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= pr
        pivots.append((col, rank))
        rank += 1
    if any(w == rhs_bit for w in work[rank:]):
        return None
    x = np.zeros(n, dtype=np.int64)
    for col, i in pivots:
        x[col] = (work[i] >> n) & 1
    pivot_cols = {col for col, _ in pivots}
    kernel = []
    for f in range(n):
        if f in pivot_cols:
            continue
        k = np.zeros(n, dtype=np.int64)
        k[f] = 1
        for col, i in pivots:
            k[col] = (work[i] >> f) & 1
        kernel.append(k)
    return Gf2Solution(x, tuple(kernel))
