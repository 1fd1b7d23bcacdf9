"""Odd-colorable r-uniform hypergraphs: colorings, chromatic numbers and
tensor-spectral certificates."""

__version__ = "0.1.0"

from .hypergraph import (
    ComponentPartition,
    HGRParseError,
    Hypergraph,
    HypergraphError,
    complete_rgraph,
    connected_components,
    degrees,
    disjoint_union,
    parse_hypergraph,
    random_rgraph,
    serialize_hypergraph,
)
from .coloring import (
    ChromaticResult,
    ConstructionParams,
    OddBipartition,
    OddColoring,
    WeakColoring,
    brute_force_odd_coloring,
    build_construction,
    check_odd_bipartition,
    check_odd_coloring,
    check_weak_coloring,
    chromatic_number,
    find_odd_bipartition,
    find_odd_coloring,
    residue_partition,
)
from .tensor import (
    DenseTensor,
    DiagonalSimilarity,
    HgTensor,
    adjacency_tensor,
    apply,
    certify_LQ_similarity,
    certify_spectrum_symmetry,
    degree_tensor,
    general_product,
    is_weakly_irreducible,
    laplacian,
    sign_similarity,
    signless_laplacian,
    similarity_conjugate,
)
from .spectral import (
    CharPoly,
    EigenPair,
    SpectrumMultiset,
    charpoly_dim2,
    eigen_residual,
    is_symmetric_spectrum,
    nqz_spectral_radius,
    rho_by_components,
    spectrum_dim2,
    transport_eigenpair,
)

__all__ = [
    "__version__",
    "ComponentPartition",
    "HGRParseError",
    "Hypergraph",
    "HypergraphError",
    "complete_rgraph",
    "connected_components",
    "degrees",
    "disjoint_union",
    "parse_hypergraph",
    "random_rgraph",
    "serialize_hypergraph",
    "ChromaticResult",
    "ConstructionParams",
    "OddBipartition",
    "OddColoring",
    "WeakColoring",
    "brute_force_odd_coloring",
    "build_construction",
    "check_odd_bipartition",
    "check_odd_coloring",
    "check_weak_coloring",
    "chromatic_number",
    "find_odd_bipartition",
    "find_odd_coloring",
    "residue_partition",
    "DenseTensor",
    "DiagonalSimilarity",
    "HgTensor",
    "adjacency_tensor",
    "apply",
    "certify_LQ_similarity",
    "certify_spectrum_symmetry",
    "degree_tensor",
    "general_product",
    "is_weakly_irreducible",
    "laplacian",
    "sign_similarity",
    "signless_laplacian",
    "similarity_conjugate",
    "CharPoly",
    "EigenPair",
    "SpectrumMultiset",
    "charpoly_dim2",
    "eigen_residual",
    "is_symmetric_spectrum",
    "nqz_spectral_radius",
    "rho_by_components",
    "spectrum_dim2",
    "transport_eigenpair",
]
