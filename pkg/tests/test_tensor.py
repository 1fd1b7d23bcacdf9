from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from helpers import planted_odd_bipartite, planted_odd_colorable
from hypothesis import given, settings
from hypothesis import strategies as st

from oddgraph.coloring import (
    ConstructionParams,
    InvalidColoringError,
    OddBipartition,
    OddColoring,
    build_construction,
    find_odd_bipartition,
    find_odd_coloring,
)
from oddgraph.hypergraph import Hypergraph, complete_rgraph, connected_components, degrees
from oddgraph.tensor import (
    DenseTensor,
    DiagonalSimilarity,
    SimilarityError,
    TensorError,
    adjacency_tensor,
    apply,
    certify_LQ_similarity,
    certify_spectrum_symmetry,
    check_similarity_relation,
    degree_tensor,
    general_product,
    is_weakly_irreducible,
    laplacian,
    lq_certificate,
    parse_dense_tensor,
    serialize_dense_tensor,
    sign_similarity,
    signless_laplacian,
    similarity_conjugate,
    spectrum_symmetry_certificate,
    unit_tensor,
)

EDGE4 = Hypergraph(4, 4, ((1, 2, 3, 4),))
TWO_EDGES = Hypergraph(4, 8, ((1, 2, 3, 4), (5, 6, 7, 8)))


@st.composite
def small_graphs(draw, rs=(2, 3, 4), max_n=6):
    r = draw(st.sampled_from(rs))
    n = draw(st.integers(r, max(r, max_n)))
    pool = list(combinations(range(1, n + 1), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=min(len(pool), 8)))
    return Hypergraph(r, n, tuple(edges))


def dense_apply(T: DenseTensor, x):
    """(Tx)_j by contracting every trailing axis with x."""
    out = T.data.astype(float)
    xf = np.asarray(x, dtype=float)
    for _ in range(T.order - 1):
        out = out @ xf
    return out


def test_adjacency_entries():
    A = adjacency_tensor(EDGE4)
    for perm in product(range(1, 5), repeat=4):
        want = Fraction(1, 6) if sorted(perm) == [1, 2, 3, 4] else Fraction(0)
        assert A.entry(perm) == want
    assert laplacian(EDGE4).diag == (1, 1, 1, 1)
    assert laplacian(EDGE4).entry((2, 1, 4, 3)) == Fraction(-1, 6)


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_q_is_d_plus_a(G):
    Q = signless_laplacian(G).to_dense().data
    D = degree_tensor(G).to_dense().data
    A = adjacency_tensor(G).to_dense().data
    L = laplacian(G).to_dense().data
    assert np.array_equal(Q, D + A)
    assert np.array_equal(L, D - A)


def test_apply_examples():
    ones = np.ones(4)
    assert apply(adjacency_tensor(EDGE4), ones).tolist() == [1, 1, 1, 1]
    assert apply(signless_laplacian(EDGE4), ones).tolist() == [2, 2, 2, 2]
    assert apply(laplacian(EDGE4), [-1, 1, 1, 1]).tolist() == [-2, 2, 2, 2]


def test_apply_exact_with_fractions():
    x = np.array([Fraction(1, 2), Fraction(1, 3), 1, 2], dtype=object)
    y = apply(signless_laplacian(EDGE4), x)
    assert y[0] == Fraction(1, 3) * 2 + Fraction(1, 8)


def test_apply_dimension_mismatch():
    with pytest.raises(TensorError):
        apply(adjacency_tensor(EDGE4), [1, 1, 1])


@given(small_graphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_edgewise_apply_matches_dense(G, data):
    x = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=G.n, max_size=G.n)))
    for T in (adjacency_tensor(G), laplacian(G), signless_laplacian(G)):
        np.testing.assert_allclose(apply(T, x), dense_apply(T.to_dense(), x), atol=1e-9)


@given(small_graphs(rs=(2, 3, 4, 5), max_n=8))
@settings(max_examples=60, deadline=None)
def test_apply_ones_gives_degrees(G):
    assert np.array_equal(apply(adjacency_tensor(G), np.ones(G.n)), degrees(G))


@pytest.mark.parametrize("n, r", [(5, 4), (6, 3), (6, 2), (7, 6)])
def test_regular_graphs_have_constant_eigenvector(n, r):
    G = complete_rgraph(n, r)
    d = int(degrees(G)[0])
    ones = np.ones(n)
    assert np.array_equal(apply(adjacency_tensor(G), ones), d * ones)
    assert np.array_equal(apply(signless_laplacian(G), ones), 2 * d * ones)


def test_general_product_matrices():
    rng = np.random.default_rng(1)
    A = rng.integers(-3, 4, (3, 3))
    B = rng.integers(-3, 4, (3, 3))
    C = general_product(DenseTensor(A), DenseTensor(B))
    assert np.array_equal(C.data, A @ B)


@pytest.mark.parametrize("seed", range(20))
def test_general_product_with_vector_is_apply(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(2, 5)), int(rng.integers(1, 5))
    A = DenseTensor(rng.normal(size=(n,) * m))
    x = rng.normal(size=n)
    C = general_product(A, DenseTensor(x))
    assert C.order == 1
    np.testing.assert_allclose(C.data, apply(A, x), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(C.data, dense_apply(A, x), rtol=1e-12, atol=1e-12)


def test_general_product_unit_tensor_is_identity():
    rng = np.random.default_rng(7)
    B = DenseTensor(rng.integers(-5, 6, (3, 3, 3)).astype(object))
    C = general_product(unit_tensor(2, 3), B)
    assert np.array_equal(C.data, B.data)
    # a unit tensor times the identity matrix is itself
    D = general_product(unit_tensor(3, 2), DenseTensor(np.eye(2, dtype=object)))
    assert np.array_equal(D.data, unit_tensor(3, 2).data)


def test_general_product_order_and_cap():
    A = DenseTensor(np.ones((2, 2, 2)))
    B = DenseTensor(np.ones((2, 2, 2)))
    assert general_product(A, B).order == 5
    with pytest.raises(TensorError):
        big = DenseTensor(np.ones((4,) * 4))
        general_product(big, big, max_entries=1000)
    with pytest.raises(TensorError):
        general_product(DenseTensor(np.ones((2, 2))), DenseTensor(np.ones((3, 3))))


def test_irreducibility_examples():
    assert is_weakly_irreducible(adjacency_tensor(EDGE4))
    res = is_weakly_irreducible(adjacency_tensor(TWO_EDGES))
    assert not res and res.witness == frozenset({1, 2, 3, 4})
    assert not is_weakly_irreducible(degree_tensor(EDGE4))


def test_irreducibility_of_dense_tensor_witness():
    # arcs 1 -> 2 only, so I = {2} is closed
    T = np.zeros((2, 2, 2))
    T[0, 1, 1] = 1.0
    res = is_weakly_irreducible(DenseTensor(T))
    assert not res
    assert res.witness == frozenset({2})


@given(small_graphs(rs=(2, 3, 4), max_n=8))
@settings(max_examples=80, deadline=None)
def test_irreducible_iff_connected(G):
    res = is_weakly_irreducible(adjacency_tensor(G))
    assert bool(res) == (len(connected_components(G)) == 1)
    if not res:
        I = res.witness
        assert 0 < len(I) < G.n
        # no edge has a vertex in I and one outside it
        for e in G.edges:
            assert set(e) <= I or not set(e) & I


def _conjugate_numerically(T, U: DiagonalSimilarity) -> np.ndarray:
    """U^{-(r-1)} T U evaluated entrywise in complex floats."""
    d = U.diagonal()
    data = T.to_dense().data.astype(complex)
    r = T.order
    it = np.nditer(data, flags=["multi_index"])
    out = np.zeros_like(data)
    for v in it:
        idx = it.multi_index
        out[idx] = complex(v) * d[idx[0]] ** (-(r - 1)) * np.prod([d[i] for i in idx[1:]])
    return out


def test_exponent_table_for_coloring():
    U = DiagonalSimilarity(4, (1, 1, 2, 2))
    conj = similarity_conjugate(adjacency_tensor(EDGE4), U)
    assert conj.edge_exponents.tolist() == [[2, 2, 2, 2]]
    assert all(s == 2 for _, _, s in conj.entries())
    assert sum(1 for _ in conj.entries()) == 24


def test_exponent_table_for_sign_similarity():
    cert = sign_similarity(EDGE4, OddBipartition(frozenset({1})))
    assert cert.certified and cert.similarity.exponents == (2, 0, 0, 0)
    conj = similarity_conjugate(adjacency_tensor(EDGE4), cert.similarity)
    assert conj.edge_exponents.tolist() == [[2, 2, 2, 2]]
    assert cert.similarity.signs().tolist() == [-1, 1, 1, 1]


def test_diagonal_exponents_vanish_and_identity_fixes():
    Q = signless_laplacian(EDGE4)
    conj = similarity_conjugate(Q, DiagonalSimilarity(4, (3, 1, 0, 2)))
    assert not conj.diag_exponents.any()
    ident = similarity_conjugate(Q, DiagonalSimilarity.identity(4, 4))
    assert all(s == 0 for _, _, s in ident.entries())
    with pytest.raises(SimilarityError):
        similarity_conjugate(Q, DiagonalSimilarity(6, (0, 0, 0, 0)))


def test_exact_exponents_match_complex_arithmetic():
    G = Hypergraph(4, 5, ((1, 2, 3, 4), (1, 2, 3, 5)))
    U = DiagonalSimilarity(4, (1, 1, 2, 2, 2))
    Q = signless_laplacian(G)
    num = _conjugate_numerically(Q, U)
    L = laplacian(G).to_dense().data.astype(complex)
    np.testing.assert_allclose(num, L, atol=1e-12)
    assert lq_certificate(G, OddColoring((1, 1, 2, 2, 2))).certified


def test_certificates_on_single_edge():
    assert certify_spectrum_symmetry(EDGE4, OddColoring((1, 1, 2, 2)))
    assert certify_LQ_similarity(EDGE4, OddColoring((1, 1, 2, 2)))
    with pytest.raises(InvalidColoringError):
        certify_spectrum_symmetry(EDGE4, OddColoring((1, 1, 1, 1)))
    with pytest.raises(InvalidColoringError):
        sign_similarity(EDGE4, OddBipartition(frozenset({1, 2})))


def test_certificates_on_edgeless_graph():
    G = Hypergraph(4, 3)
    assert certify_LQ_similarity(G, OddColoring((3, 1, 2)))
    assert certify_spectrum_symmetry(G, OddColoring((4, 4, 4)))


@pytest.mark.parametrize("q, t", [(1, 0), (1, 1), (2, 0)])
def test_certificates_on_construction(q, t):
    con = build_construction(ConstructionParams(q, t))
    sym = spectrum_symmetry_certificate(con.graph, con.coloring)
    lq = lq_certificate(con.graph, con.coloring)
    assert sym.certified and sym.exponent_violations == 0
    assert lq.certified and lq.exponent_violations == 0


@pytest.mark.parametrize("seed", range(15))
def test_certificates_on_random_colorable(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.choice([4, 6, 8]))
    G = planted_odd_colorable(int(rng.integers(r, r + 5)), r, 20, rng)
    c = find_odd_coloring(G)
    assert certify_spectrum_symmetry(G, c)
    assert certify_LQ_similarity(G, c)


@pytest.mark.parametrize("seed", range(10))
def test_sign_similarity_on_random_bipartite(seed):
    rng = np.random.default_rng(100 + seed)
    G = planted_odd_bipartite(8, 4, 15, rng)
    b = find_odd_bipartition(G)
    cert = sign_similarity(G, b)
    assert cert.certified and cert.similarity.is_real
    assert check_similarity_relation(signless_laplacian(G), laplacian(G), cert.similarity)
    A = adjacency_tensor(G)
    assert check_similarity_relation(A, A, DiagonalSimilarity.identity(4, G.n))


def test_similarity_relation_rejects_wrong_pairs():
    S = DiagonalSimilarity(4, (2, 0, 0, 0))
    assert check_similarity_relation(signless_laplacian(EDGE4), laplacian(EDGE4), S)
    assert not check_similarity_relation(signless_laplacian(EDGE4), signless_laplacian(EDGE4), S)
    assert not check_similarity_relation(
        signless_laplacian(EDGE4), laplacian(EDGE4), DiagonalSimilarity(4, (1, 0, 0, 0))
    )


def test_dense_format_roundtrip():
    rng = np.random.default_rng(3)
    flat = [Fraction(int(a), int(b)) for a, b in rng.integers(1, 9, (8, 2))]
    data = np.empty(8, dtype=object)
    data[:] = flat
    T = DenseTensor(data.reshape(2, 2, 2))
    text = serialize_dense_tensor(T)
    assert text.splitlines()[0] == "3 2"
    back = parse_dense_tensor(text)
    assert np.array_equal(back.data, T.data)
    assert parse_dense_tensor("2 1\n0.25\n").data[0, 0] == Fraction(1, 4)
    with pytest.raises(TensorError):
        parse_dense_tensor("2 2\n1\n2\n3\n")
