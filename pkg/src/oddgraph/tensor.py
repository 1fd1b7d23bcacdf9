"""Hypergraph tensors, the general tensor product, weak irreducibility and
exact diagonal-similarity certificates.

``HgTensor`` never materializes its n^r entries: tensor-vector products are
evaluated edge by edge. ``DenseTensor`` is the full-array counterpart used
for small generic tensors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Iterator, Sequence, Union

import numpy as np

from .coloring import (
    InvalidColoringError,
    OddBipartition,
    OddColoring,
    check_odd_bipartition,
    check_odd_coloring,
)
from .hypergraph import Hypergraph, degrees


class TensorError(ValueError):
    pass


class SimilarityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HgTensor:
    """T with T_{j..j} = diag[j] and T_{pi(e)} = edge_coeff / (r-1)! for every
    ordering pi(e) of every edge e."""

    graph: Hypergraph
    diag: tuple[Fraction, ...]
    edge_coeff: Fraction
    name: str = ""

    @property
    def order(self) -> int:
        return self.graph.r

    @property
    def dim(self) -> int:
        return self.graph.n

    @property
    def edge_entry(self) -> Fraction:
        return self.edge_coeff / math.factorial(self.order - 1)

    @cached_property
    def _edges0(self) -> np.ndarray:
        return self.graph.edge_array()

    def entry(self, index: Sequence[int]) -> Fraction:
        """Entry at a 1-based index tuple."""
        idx = tuple(index)
        if len(idx) != self.order or any(not 1 <= i <= self.dim for i in idx):
            raise IndexError(f"bad index {idx}")
        if all(i == idx[0] for i in idx):
            return self.diag[idx[0] - 1]
        key = tuple(sorted(idx))
        if len(set(key)) == self.order and key in self._edge_lookup:
            return self.edge_entry
        return Fraction(0)

    @cached_property
    def _edge_lookup(self) -> frozenset:
        return frozenset(self.graph.edges)

    def to_dense(self, max_entries: int = 10**6) -> "DenseTensor":
        size = self.dim**self.order
        if size > max_entries:
            raise TensorError(f"dense tensor would need {size} entries (cap {max_entries})")
        data = np.zeros((self.dim,) * self.order, dtype=object)
        data[...] = Fraction(0)
        for j, d in enumerate(self.diag):
            data[(j,) * self.order] = d
        if self.edge_coeff:
            for e in self.graph.edges:
                for perm in permutations(v - 1 for v in e):
                    data[perm] = self.edge_entry
        return DenseTensor(data)


@dataclass(frozen=True, eq=False)
class DenseTensor:
    data: np.ndarray

    def __post_init__(self):
        shape = self.data.shape
        if len(shape) < 1 or len(set(shape)) != 1:
            raise TensorError(f"dense tensor must be cubical, got shape {shape}")

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(-self.data)


Tensor = Union[HgTensor, DenseTensor]


def _frac_tuple(vals) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(v)) for v in vals)


def adjacency_tensor(G: Hypergraph) -> HgTensor:
    return HgTensor(G, (Fraction(0),) * G.n, Fraction(1), "A")


def degree_tensor(G: Hypergraph) -> HgTensor:
    return HgTensor(G, _frac_tuple(degrees(G)), Fraction(0), "D")


def laplacian(G: Hypergraph) -> HgTensor:
    return HgTensor(G, _frac_tuple(degrees(G)), Fraction(-1), "L")


def signless_laplacian(G: Hypergraph) -> HgTensor:
    return HgTensor(G, _frac_tuple(degrees(G)), Fraction(1), "Q")


def unit_tensor(order: int, dim: int, exact: bool = True) -> DenseTensor:
    data = np.zeros((dim,) * order, dtype=object if exact else float)
    if exact:
        data[...] = Fraction(0)
    for j in range(dim):
        data[(j,) * order] = Fraction(1) if exact else 1.0
    return DenseTensor(data)


def apply(T: Tensor, x) -> np.ndarray:
    """(Tx)_j = sum over j_2..j_r of T_{j j_2..j_r} x_{j_2} ... x_{j_r}.

    Object arrays (e.g. Fractions) are evaluated exactly; numeric arrays in
    floating point.
    """
    x = np.asarray(x)
    if x.shape != (T.dim,):
        raise TensorError(f"vector has shape {x.shape}, expected ({T.dim},)")
    if isinstance(T, DenseTensor):
        if T.order < 2:
            raise TensorError("apply needs order >= 2")
        y = T.data
        for _ in range(T.order - 1):
            y = y.dot(x)
        return y
    exact = x.dtype == object
    if exact:
        diag = np.array(T.diag, dtype=object)
        coeff = T.edge_coeff
    else:
        x = x.astype(np.result_type(x.dtype, float))
        diag = np.array([float(d) for d in T.diag])
        coeff = float(T.edge_coeff)
    r = T.order
    out = np.zeros(T.dim, dtype=x.dtype)
    if exact:
        out[:] = Fraction(0)
    E = T._edges0
    if coeff and len(E):
        X = x[E]
        # (r-1)! orderings of the remaining vertices cancel the 1/(r-1)!
        for p in range(r):
            others = np.prod(np.delete(X, p, axis=1), axis=1)
            np.add.at(out, E[:, p], others)
        out = out * coeff
    return out + diag * x ** (r - 1)


def general_product(A: DenseTensor, B: DenseTensor, max_entries: int = 10**6) -> DenseTensor:
    """C_{i a_1..a_{m-1}} = sum A_{i i_2..i_m} B_{i_2 a_1} ... B_{i_m a_{m-1}}.

    A has order m >= 2 and B order k >= 1; C has order (m-1)(k-1)+1. The
    index a_l ranges over [n]^(k-1) in row-major order.
    """
    m, k, n = A.order, B.order, A.dim
    if m < 2:
        raise TensorError("left operand must have order >= 2")
    if B.dim != n:
        raise TensorError(f"dimension mismatch: {n} vs {B.dim}")
    out_order = (m - 1) * (k - 1) + 1
    if n**out_order > max_entries:
        raise TensorError(f"product would need {n ** out_order} entries (cap {max_entries})")
    Bmat = B.data.reshape(n, n ** (k - 1))
    C = A.data
    for _ in range(m - 1):
        C = np.tensordot(C, Bmat, axes=([1], [0]))
    return DenseTensor(C.reshape((n,) * out_order))


@dataclass(frozen=True)
class Irreducibility:
    irreducible: bool
    witness: frozenset[int] | None = None  # 1-based I with no arcs leaving I

    def __bool__(self) -> bool:
        return self.irreducible


def _arcs(T: Tensor) -> list[set[int]]:
    n = T.dim
    out: list[set[int]] = [set() for _ in range(n)]
    if isinstance(T, HgTensor):
        if T.edge_coeff:
            for e in T.graph.edges:
                for u in e:
                    out[u - 1].update(v - 1 for v in e if v != u)
        return out
    for i in range(n):
        coords = np.nonzero(T.data[i] != 0)
        for axis in coords:
            out[i].update(int(j) for j in axis)
        out[i].discard(i)
    return out


def _reach(adj: list[set[int]], s: int) -> set[int]:
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_weakly_irreducible(T: Tensor) -> Irreducibility:
    """Strong connectivity of the digraph with arc i -> j whenever some entry
    T_{i i_2..i_r} is nonzero with j among i_2..i_r.

    On failure the witness I is closed under arcs, i.e. every entry with first
    index in I and some later index outside I vanishes.
    """
    if T.order < 2:
        raise TensorError("weak irreducibility needs order >= 2")
    n = T.dim
    if n == 1:
        return Irreducibility(True)
    adj = _arcs(T)
    fwd = _reach(adj, 0)
    if len(fwd) < n:
        return Irreducibility(False, frozenset(v + 1 for v in fwd))
    radj: list[set[int]] = [set() for _ in range(n)]
    for u, vs in enumerate(adj):
        for v in vs:
            radj[v].add(u)
    back = _reach(radj, 0)
    if len(back) < n:
        v = min(set(range(n)) - back)
        return Irreducibility(False, frozenset(w + 1 for w in _reach(adj, v)))
    return Irreducibility(True)


# --- diagonal similarity ----------------------------------------------------


@dataclass(frozen=True)
class DiagonalSimilarity:
    """U = diag(w^k_1, ..., w^k_n) with w = exp(2 pi i / modulus)."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise SimilarityError("modulus must be positive")
        object.__setattr__(
            self, "exponents", tuple(int(k) % self.modulus for k in self.exponents)
        )

    @classmethod
    def identity(cls, modulus: int, n: int) -> "DiagonalSimilarity":
        return cls(modulus, (0,) * n)

    def diagonal(self) -> np.ndarray:
        k = np.asarray(self.exponents, dtype=float)
        return np.exp(2j * np.pi * k / self.modulus)

    @property
    def is_real(self) -> bool:
        half = self.modulus // 2 if self.modulus % 2 == 0 else None
        return all(k == 0 or k == half for k in self.exponents)

    def signs(self) -> np.ndarray:
        if not self.is_real:
            raise SimilarityError("similarity has non-real diagonal entries")
        return np.array([1 if k == 0 else -1 for k in self.exponents], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ConjugatedTensor:
    """U^{-(r-1)} T U stored as exponents of w multiplying T's entries.

    Every ordering of an edge that starts at the same vertex picks up the
    same exponent, so ``edge_exponents[e, p]`` covers all entries of edge
    ``e`` whose first index is its p-th vertex.
    """

    tensor: HgTensor
    similarity: DiagonalSimilarity
    diag_exponents: np.ndarray
    edge_exponents: np.ndarray

    def entries(self) -> Iterator[tuple[tuple[int, ...], Fraction, int]]:
        """Every structural entry as (1-based index, value of T there, exponent)."""
        T = self.tensor
        for j, d in enumerate(T.diag):
            if d:
                yield (j + 1,) * T.order, d, int(self.diag_exponents[j])
        if not T.edge_coeff:
            return
        for e, row in zip(T.graph.edges, self.edge_exponents):
            for p, first in enumerate(e):
                rest = e[:p] + e[p + 1 :]
                for perm in permutations(rest):
                    yield (first,) + perm, T.edge_entry, int(row[p])

    def violations(self, edge_target: int) -> int:
        """Structural entries off the requested pattern: diagonal exponent
        nonzero, or an edge exponent different from ``edge_target``.

        Edge entries are counted per (edge, first index) group.
        """
        r = self.similarity.modulus
        bad = int(np.count_nonzero(self.diag_exponents % r))
        if self.tensor.edge_coeff and self.edge_exponents.size:
            bad += int(np.count_nonzero(self.edge_exponents % r != edge_target % r))
        return bad


def similarity_conjugate(T: HgTensor, U: DiagonalSimilarity) -> ConjugatedTensor:
    """Exponent s = k_{j2} + ... + k_{jr} - (r-1) k_{j1} (mod r) for every
    structural entry (j1, ..., jr); integer arithmetic only."""
    r = T.order
    if U.modulus != r:
        raise SimilarityError(f"similarity modulus {U.modulus} != tensor order {r}")
    if len(U.exponents) != T.dim:
        raise SimilarityError(f"similarity has {len(U.exponents)} entries, expected {T.dim}")
    k = np.asarray(U.exponents, dtype=np.int64)
    diag_s = ((r - 1) * k - (r - 1) * k) % r
    E = T._edges0
    if len(E):
        K = k[E]
        rest = K.sum(axis=1, keepdims=True) - K
        edge_s = (rest - (r - 1) * K) % r
    else:
        edge_s = np.zeros((0, r), dtype=np.int64)
    return ConjugatedTensor(T, U, diag_s, edge_s)


@dataclass(frozen=True)
class SimilarityCertificate:
    certified: bool
    exponent_violations: int
    similarity: DiagonalSimilarity


def _coloring_similarity(G: Hypergraph, c: OddColoring) -> DiagonalSimilarity:
    if not check_odd_coloring(G, c):
        raise InvalidColoringError("not an odd-coloring; certificate refused")
    return DiagonalSimilarity(G.r, tuple(int(v) for v in c.residues(G.r)))


def spectrum_symmetry_certificate(G: Hypergraph, c: OddColoring) -> SimilarityCertificate:
    U = _coloring_similarity(G, c)
    conj = similarity_conjugate(adjacency_tensor(G), U)
    bad = conj.violations(G.r // 2)
    return SimilarityCertificate(bad == 0, bad, U)


def certify_spectrum_symmetry(G: Hypergraph, c: OddColoring) -> bool:
    """True certifies U^{-(r-1)} A U = -A, hence Spec(A) = -Spec(A)."""
    return spectrum_symmetry_certificate(G, c).certified


def lq_certificate(G: Hypergraph, c: OddColoring) -> SimilarityCertificate:
    U = _coloring_similarity(G, c)
    # D is fixed and A -> -A, so a violation-free conjugate of Q is exactly L
    bad = similarity_conjugate(signless_laplacian(G), U).violations(G.r // 2)
    return SimilarityCertificate(bad == 0, bad, U)


def certify_LQ_similarity(G: Hypergraph, c: OddColoring) -> bool:
    """True certifies U^{-(r-1)} Q U = L, hence Spec(L) = Spec(Q)."""
    return lq_certificate(G, c).certified


def sign_similarity(G: Hypergraph, b: OddBipartition) -> SimilarityCertificate:
    """Real +-1 similarity S (-1 on V1) with S^{-(r-1)} Q S = L checked exactly."""
    if not check_odd_bipartition(G, b):
        raise InvalidColoringError("not an odd-bipartition; certificate refused")
    half = G.r // 2
    S = DiagonalSimilarity(G.r, tuple(half if v in b.part else 0 for v in range(1, G.n + 1)))
    bad = similarity_conjugate(signless_laplacian(G), S).violations(half)
    return SimilarityCertificate(bad == 0, bad, S)


def check_similarity_relation(src: HgTensor, dst: HgTensor, S: DiagonalSimilarity) -> bool:
    """Exactly verify S^{-(r-1)} src S = dst for a real (+-1) similarity."""
    if not S.is_real:
        return False
    if src.graph != dst.graph or src.diag != dst.diag:
        return False
    conj = similarity_conjugate(src, S)
    if np.any(conj.diag_exponents):
        return False
    if not src.edge_coeff and not dst.edge_coeff:
        return True
    if src.edge_coeff == dst.edge_coeff:
        return conj.violations(0) == 0
    if src.edge_coeff == -dst.edge_coeff:
        return conj.violations(S.modulus // 2) == 0
    return False


# --- text format ------------------------------------------------------------


def parse_dense_tensor(text: str) -> DenseTensor:
    """Header ``order dim``, then dim^order entries in row-major order, one
    per line, as exact rationals ``p/q`` or decimals."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TensorError("empty tensor file")
    try:
        order, dim = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise TensorError("malformed header, expected 'order dim'") from None
    if order < 1 or dim < 1:
        raise TensorError("order and dim must be positive")
    want = dim**order
    if len(lines) - 1 != want:
        raise TensorError(f"expected {want} entries, found {len(lines) - 1}")
    try:
        vals = [Fraction(ln) for ln in lines[1:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise TensorError(f"bad entry: {exc}") from None
    data = np.empty(want, dtype=object)
    data[:] = vals
    return DenseTensor(data.reshape((dim,) * order))


def serialize_dense_tensor(T: DenseTensor) -> str:
    lines = [f"{T.order} {T.dim}"]
    lines.extend(str(Fraction(v)) for v in T.data.reshape(-1))
    return "\n".join(lines) + "\n"
