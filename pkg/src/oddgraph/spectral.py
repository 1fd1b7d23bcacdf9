"""Spectral radii by NQZ iteration, eigenpair residuals and transport, and
exact characteristic polynomials of dimension-2 tensors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .hypergraph import Hypergraph, connected_components
from .tensor import (
    DenseTensor,
    DiagonalSimilarity,
    HgTensor,
    SimilarityError,
    Tensor,
    TensorError,
    adjacency_tensor,
    apply,
    check_similarity_relation,
    is_weakly_irreducible,
    signless_laplacian,
)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
ROOT_CLUSTER_TOL = 1e-7


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, bracket: tuple[float, float], iterations: int):
        super().__init__(f"{message}; bracket [{bracket[0]:.12g}, {bracket[1]:.12g}]")
        self.bracket = bracket
        self.iterations = iterations


class NegativeTensorError(ValueError):
    pass


class ReducibleTensorError(ValueError):
    def __init__(self, witness):
        super().__init__(f"tensor is weakly reducible (closed index set {sorted(witness)})")
        self.witness = witness


@dataclass
class EigenPair:
    """(lam, x) with T x = lam x^[r-1]; ``residual`` is the max-norm defect
    after scaling x to unit max-norm."""

    lam: float
    x: np.ndarray
    residual: float
    iterations: int = 0
    bracket: tuple[float, float] | None = None
    history: list[tuple[float, float]] | None = field(default=None, repr=False)


def _is_nonnegative(T: Tensor) -> bool:
    if isinstance(T, HgTensor):
        return all(d >= 0 for d in T.diag) and (T.edge_coeff >= 0 or not T.graph.edges)
    data = np.asarray(T.data)
    if np.iscomplexobj(data):
        return False
    return bool(np.all(data >= 0))


def eigen_residual(T: Tensor, lam: float, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    scale = np.max(np.abs(x)) if x.size else 0.0
    if scale == 0:
        raise ValueError("eigenvector must be nonzero")
    xn = x / scale
    defect = _apply_float(T, xn) - lam * xn ** (T.order - 1)
    return float(np.max(np.abs(defect)))


def _apply_float(T: Tensor, x: np.ndarray) -> np.ndarray:
    if isinstance(T, DenseTensor) and T.data.dtype == object:
        T = DenseTensor(T.data.astype(float))
    return np.asarray(apply(T, x), dtype=float)


def nqz_spectral_radius(
    T: Tensor,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    record_history: bool = False,
) -> EigenPair:
    """Spectral radius of a nonnegative weakly irreducible tensor.

    Iterates on T + I (the unit-diagonal shift moves every H-eigenvalue by
    exactly 1 and makes the iteration primitive), from the uniform vector:
    y = (T + I) x, the ratios y_j / x_j^(r-1) bracket rho + 1, and
    x <- y^[1/(r-1)] normalized to unit max-norm. Stops once the bracket is
    no wider than ``tol``; the returned ``lam`` is the bracket midpoint
    minus the shift.
    """
    if not _is_nonnegative(T):
        raise NegativeTensorError("NQZ iteration needs an entrywise nonnegative tensor")
    irr = is_weakly_irreducible(T)
    if not irr:
        raise ReducibleTensorError(irr.witness)
    r, n = T.order, T.dim
    x = np.ones(n)
    history: list[tuple[float, float]] | None = [] if record_history else None
    lo = hi = float("nan")
    for it in range(1, max_iter + 1):
        xp = x ** (r - 1)
        y = _apply_float(T, x) + xp
        ratios = y / xp
        lo, hi = float(ratios.min()), float(ratios.max())
        if history is not None:
            history.append((lo - 1.0, hi - 1.0))
        if hi - lo <= tol:
            lam = 0.5 * (lo + hi) - 1.0
            return EigenPair(
                lam, x, eigen_residual(T, lam, x), it, (lo - 1.0, hi - 1.0), history
            )
        x = y ** (1.0 / (r - 1))
        x /= x.max()
    raise ConvergenceError(
        f"NQZ did not converge in {max_iter} iterations", (lo - 1.0, hi - 1.0), max_iter
    )


def transport_eigenpair(
    pair: EigenPair,
    S: DiagonalSimilarity,
    src: HgTensor,
    dst: HgTensor,
    tol: float = 1e-8,
) -> EigenPair:
    """Carry an H-eigenpair of ``src`` to ``dst`` through a +-1 similarity.

    Requires S^{-(r-1)} src S = dst, checked exactly. If src x = lam x^[r-1]
    then dst (S x) = lam (S x)^[r-1], since S is its own inverse.
    """
    if not S.is_real or S.modulus != src.order:
        raise SimilarityError("transport needs a real (+-1) similarity of matching order")
    if not check_similarity_relation(src, dst, S):
        raise SimilarityError("similarity certificate does not relate the two tensors")
    res_in = eigen_residual(src, pair.lam, pair.x)
    if res_in > tol:
        raise ValueError(f"input pair has residual {res_in:.3g} > {tol:.3g}")
    y = S.signs() * np.asarray(pair.x, dtype=float)
    res_out = eigen_residual(dst, pair.lam, y)
    slack = 64 * np.finfo(float).eps * max(1.0, abs(pair.lam))
    if res_out > res_in + slack:
        raise SimilarityError(f"residual grew from {res_in:.3g} to {res_out:.3g}")
    return EigenPair(pair.lam, y, res_out, pair.iterations, pair.bracket)


def component_radii(G: Hypergraph, which: str = "Q", tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """NQZ on each connected component, in component order."""
    build = {"A": adjacency_tensor, "Q": signless_laplacian}.get(which)
    if build is None:
        raise ValueError(f"which must be 'A' or 'Q', got {which!r}")
    return [nqz_spectral_radius(build(H), tol) for H in connected_components(G).subgraphs]


def rho_by_components(G: Hypergraph, which: str = "Q", tol: float = DEFAULT_TOL) -> float:
    """rho of A(G) or Q(G) as the largest component radius; the spectrum of a
    disjoint union is the union of the component spectra."""
    return max(p.lam for p in component_radii(G, which, tol))


# --- dimension-2 characteristic polynomials ----------------------------------


def _ptrim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _pderiv(p: list[Fraction]) -> list[Fraction]:
    d = len(p) - 1
    if d == 0:
        return [Fraction(0)]
    return [c * (d - i) for i, c in enumerate(p[:-1])]


def _pdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a, b = _ptrim(a[:]), _ptrim(b)
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [Fraction(0)], a
    q = []
    rem = a[:]
    for _ in range(len(a) - len(b) + 1):
        c = rem[0] / b[0]
        q.append(c)
        rem = [x - c * y for x, y in zip(rem, b + [Fraction(0)] * (len(rem) - len(b)))][1:]
    return q, _ptrim(rem or [Fraction(0)])


def _psub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    k = max(len(a), len(b))
    a = [Fraction(0)] * (k - len(a)) + a
    b = [Fraction(0)] * (k - len(b)) + b
    return _ptrim([x - y for x, y in zip(a, b)])


def _monic(p: list[Fraction]) -> list[Fraction]:
    p = _ptrim(p)
    return [c / p[0] for c in p] if p[0] else p


def _pgcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _ptrim(a), _ptrim(b)
    while b != [0]:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a)


def squarefree_factors(p: Sequence[Fraction]) -> list[list[Fraction]]:
    """Yun's algorithm: monic f_1, f_2, ... with p = c * prod f_i^i."""
    f = _ptrim([Fraction(c) for c in p])
    if len(f) == 1:
        return []
    fp = _pderiv(f)
    a = _pgcd(f, fp)
    b = _pdivmod(f, a)[0]
    c = _pdivmod(fp, a)[0]
    d = _psub(c, _pderiv(b))
    out = []
    while len(b) > 1:
        ai = _pgcd(b, d)
        b = _pdivmod(b, ai)[0]
        c = _pdivmod(d, ai)[0]
        d = _psub(c, _pderiv(b))
        out.append(ai)
    return out


@dataclass(frozen=True)
class CharPoly:
    """Coefficients in lambda, highest degree first."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        acc = 0 * lam
        for c in self.coeffs:
            acc = acc * lam + c
        return acc


@dataclass(frozen=True)
class SpectrumMultiset:
    roots: tuple[complex, ...]
    multiplicities: tuple[int, ...]

    def expanded(self) -> np.ndarray:
        return np.repeat(np.asarray(self.roots, dtype=complex), self.multiplicities)

    @property
    def size(self) -> int:
        return sum(self.multiplicities)


def _binary_form_coeffs(T: DenseTensor, j: int) -> list[Fraction]:
    """Coefficients of (Tx)_j on x1^(d-k) x2^k, k = 0..d, d = order - 1."""
    d = T.order - 1
    out = [Fraction(0)] * (d + 1)
    for idx in product((0, 1), repeat=d):
        out[sum(idx)] += Fraction(T.data[(j,) + idx])
    return out


def _det(rows: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in rows]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        pv = A[c][c]
        det *= pv
        for i in range(c + 1, n):
            f = A[i][c] / pv
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of two coefficient lists (highest power first), with
    formal degrees len(f)-1 and len(g)-1."""
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    zero = f[0] * 0
    rows = []
    for i in range(dg):
        rows.append([zero] * i + list(f) + [zero] * (size - df - 1 - i))
    for i in range(df):
        rows.append([zero] * i + list(g) + [zero] * (size - dg - 1 - i))
    return rows


def _interpolate(xs: list[int], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (highest first) of the polynomial through (xs, ys)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = poly + [Fraction(0)]
        for k in range(len(poly)):
            shifted[k + 1] -= xs[i] * poly[k]
        shifted[-1] += coef[i]
        poly = shifted
    return poly


def charpoly_dim2(T: DenseTensor) -> CharPoly:
    """det(lam I - T) for a dimension-2 tensor of order r.

    The determinant is the resultant of the binary forms
    f_j = lam x_j^(r-1) - (Tx)_j, j = 1, 2. Their Sylvester matrix has entries
    linear in lam; its determinant (degree 2(r-1)) is evaluated exactly at
    2(r-1)+1 integer points and interpolated.
    """
    if T.dim != 2:
        raise TensorError(f"charpoly_dim2 needs dimension 2, got {T.dim}")
    if T.order < 2:
        raise TensorError("order must be >= 2")
    d = T.order - 1
    c1 = _binary_form_coeffs(T, 0)
    c2 = _binary_form_coeffs(T, 1)
    deg = 2 * d
    xs = list(range(deg + 1))
    ys = []
    for lam in xs:
        f1 = [-c for c in c1]
        f2 = [-c for c in c2]
        f1[0] += lam
        f2[d] += lam
        ys.append(_det(sylvester_matrix(f1, f2)))
    coeffs = _interpolate(xs, ys)
    return CharPoly(tuple(_ptrim(coeffs)))


def _polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    dcoeffs = np.polyder(coeffs)
    for _ in range(steps):
        fz = np.polyval(coeffs, z)
        dz = np.polyval(dcoeffs, z)
        if dz == 0:
            break
        step = fz / dz
        if not np.isfinite(step):
            break
        z = z - step
    return z


def spectrum_dim2(
    T: DenseTensor | CharPoly, cluster_tol: float = ROOT_CLUSTER_TOL
) -> SpectrumMultiset:
    """Roots of the characteristic polynomial with multiplicities.

    Multiplicities come from an exact square-free factorization; each
    square-free factor is solved by its companion matrix (numpy.roots) and
    Newton-polished. Roots from different factors closer than
    ``cluster_tol`` are merged.
    """
    cp = T if isinstance(T, CharPoly) else charpoly_dim2(T)
    found: list[tuple[complex, int]] = []
    for mult, factor in enumerate(squarefree_factors(cp.coeffs), start=1):
        if len(factor) < 2:
            continue
        fc = np.array([float(c) for c in factor])
        roots = np.roots(fc)
        if not np.all(np.isfinite(roots)):
            raise ConvergenceError("root finding failed", (float("nan"),) * 2, 0)
        found.extend((complex(_polish(fc, z)), mult) for z in roots)
    merged: list[list] = []
    for z, m in found:
        for slot in merged:
            if abs(slot[0] - z) <= cluster_tol:
                slot[1] += m
                break
        else:
            merged.append([z, m])
    merged.sort(key=lambda s: (s[0].real, s[0].imag))
    return SpectrumMultiset(tuple(s[0] for s in merged), tuple(s[1] for s in merged))


def multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """max |a_i - b_pi(i)| over the matching pi of least total distance;
    infinite when the sizes differ."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    ri, ci = linear_sum_assignment(cost)
    return float(cost[ri, ci].max())


def is_symmetric_spectrum(s: SpectrumMultiset, tol: float = ROOT_CLUSTER_TOL) -> bool:
    """Pair every root mu with a root at -mu (multiplicities respected)."""
    z = s.expanded()
    return multiset_distance(z, -z) <= tol
