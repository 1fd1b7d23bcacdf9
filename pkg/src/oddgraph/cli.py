"""Command-line front end. Every command prints one JSON run report.

Exit codes: 0 success (an UNSAT "none" answer included), 2 usage or input
error, 3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Any

from . import __version__
from .coloring import (
    ConstructionError,
    ConstructionParams,
    InvalidColoringError,
    OddBipartition,
    OddColoring,
    OddUniformityError,
    build_construction,
    chromatic_number,
    find_odd_bipartition,
    find_odd_coloring,
)
from .hypergraph import (
    HypergraphError,
    connected_components,
    parse_hypergraph,
    serialize_hypergraph,
)
from .spectral import (
    ConvergenceError,
    ReducibleTensorError,
    charpoly_dim2,
    is_symmetric_spectrum,
    nqz_spectral_radius,
    spectrum_dim2,
    transport_eigenpair,
    ROOT_CLUSTER_TOL,
)
from .tensor import (
    SimilarityError,
    TensorError,
    adjacency_tensor,
    laplacian,
    lq_certificate,
    parse_dense_tensor,
    sign_similarity,
    signless_laplacian,
    spectrum_symmetry_certificate,
)


class UsageError(Exception):
    pass


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_input(path: str) -> tuple[bytes, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return raw, raw.decode("utf-8")


def _load_graph(path: str):
    raw, text = _read_input(path)
    return parse_hypergraph(text), _digest(raw)


def _load_json_list(path: str, key: str) -> list[int]:
    _, text = _read_input(path)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None
    if isinstance(payload, dict):
        payload = payload.get(key)
    if not isinstance(payload, list) or not all(isinstance(v, int) for v in payload):
        raise UsageError(f"{path}: expected a JSON array of integers")
    return payload


def _eigenreport(matrix: str, pair) -> dict[str, Any]:
    return {
        "matrix": matrix,
        "rho": _num(pair.lam),
        "vector": [_num(v) for v in pair.x],
        "residual": _num(pair.residual),
        "iterations": pair.iterations,
        "bracket": [_num(b) for b in pair.bracket] if pair.bracket else None,
    }


# --- commands ---------------------------------------------------------------


def cmd_gen(args) -> tuple[dict, dict, str | None]:
    blocks = None
    probe = ConstructionParams(args.q, args.t)
    if args.block_size is not None:
        blocks = (args.block_size,) * probe.blocks
    params = ConstructionParams(args.q, args.t, blocks)
    con = build_construction(params, sample_cap=args.sample_cap, seed=args.seed)
    hgr = serialize_hypergraph(con.graph)
    result: dict[str, Any] = {
        "r": params.r,
        "n": con.graph.n,
        "m": con.graph.m,
        "block_sizes": list(params.block_sizes),
        "b_table": [
            {"i": i, "j": j, "p": p, "a": a, "b": b, "edges": con.family_sizes[(i, j)]}
            for (i, j) in params.b_table()
            for p, a, b in [params.pair_data(i, j)]
        ],
        "coloring": list(con.coloring.phi),
    }
    if args.out:
        out = Path(args.out)
        side = out.with_suffix(".coloring.json")
        _write_atomic(out, hgr)
        _write_atomic(side, json.dumps(list(con.coloring.phi)) + "\n")
        result["graph_file"] = str(out)
        result["coloring_file"] = str(side)
    params_echo = {
        "q": args.q,
        "t": args.t,
        "block_size": args.block_size,
        "sample_cap": args.sample_cap,
        "seed": args.seed,
    }
    return params_echo, result, _digest(hgr.encode())


def cmd_color(args) -> tuple[dict, dict, str | None]:
    G, digest = _load_graph(args.input)
    params: dict[str, Any] = {"mode": args.mode}
    if args.mode == "odd":
        c = find_odd_coloring(G)
        result = {"status": "none"} if c is None else {"status": "found", "coloring": list(c.phi)}
    elif args.mode == "bipartite":
        b = find_odd_bipartition(G)
        result = {"status": "none"} if b is None else {"status": "found", "part": sorted(b.part)}
    else:
        params["budget_s"] = args.budget_s
        res = chromatic_number(G, args.budget_s)
        result = {
            "status": "exact" if res.exact else "timeout",
            "chromatic_number": res.value,
            "bracket": [res.lower, res.upper],
            "witness": list(res.witness.classes),
            "search_nodes": res.nodes,
        }
    return params, result, digest


def cmd_certify(args) -> tuple[dict, dict, str | None]:
    G, digest = _load_graph(args.input)
    params: dict[str, Any] = {"mode": args.mode}
    if args.mode == "sign":
        if args.bipartition:
            params["bipartition"] = args.bipartition
            b = OddBipartition(frozenset(_load_json_list(args.bipartition, "part")))
        else:
            b = find_odd_bipartition(G)
            if b is None:
                return (
                    params,
                    {
                        "certified": False,
                        "reason": "no odd-bipartition exists; certificate unavailable",
                    },
                    digest,
                )
        cert = sign_similarity(G, b)
        result = {
            "certified": cert.certified,
            "exponent_violations": cert.exponent_violations,
            "similarity": list(cert.similarity.exponents),
            "S": [int(s) for s in cert.similarity.signs()],
            "part": sorted(b.part),
        }
        return params, result, digest
    if args.coloring:
        params["coloring"] = args.coloring
        c = OddColoring(tuple(_load_json_list(args.coloring, "coloring")))
    else:
        c = find_odd_coloring(G)
        if c is None:
            return (
                params,
                {
                    "certified": False,
                    "reason": "no odd-coloring exists; certificate unavailable",
                },
                digest,
            )
    cert = (spectrum_symmetry_certificate if args.mode == "symmetry" else lq_certificate)(G, c)
    result = {
        "certified": cert.certified,
        "exponent_violations": cert.exponent_violations,
        "similarity": list(cert.similarity.exponents),
        "coloring": list(c.phi),
    }
    return params, result, digest


def cmd_spectral(args) -> tuple[dict, dict, str | None]:
    params: dict[str, Any] = {"mode": args.mode, "tol": args.tol}
    if args.mode == "spectrum":
        raw, text = _read_input(args.input)
        T = parse_dense_tensor(text)
        cp = charpoly_dim2(T)
        roots = spectrum_dim2(cp, args.cluster_tol)
        params["cluster_tol"] = args.cluster_tol
        result = {
            "order": T.order,
            "dim": T.dim,
            "charpoly": [str(c) for c in cp.coeffs],
            "degree": cp.degree,
            "roots": [
                {"re": _num(z.real), "im": _num(z.imag), "multiplicity": m}
                for z, m in zip(roots.roots, roots.multiplicities)
            ],
            "symmetric": is_symmetric_spectrum(roots, args.cluster_tol),
        }
        return params, result, _digest(raw)

    G, digest = _load_graph(args.input)
    if args.mode == "radius":
        params.update(matrix=args.matrix, per_component=args.per_component)
        build = adjacency_tensor if args.matrix == "A" else signless_laplacian
        if args.per_component:
            comps = connected_components(G)
            reports = []
            for block, H in zip(comps.blocks, comps.subgraphs):
                rep = _eigenreport(
                    args.matrix, nqz_spectral_radius(build(H), args.tol, args.max_iter)
                )
                rep["block"] = list(block)
                reports.append(rep)
            result = {
                "matrix": args.matrix,
                "rho": max(rep["rho"] for rep in reports),
                "components": reports,
            }
        else:
            result = _eigenreport(
                args.matrix, nqz_spectral_radius(build(G), args.tol, args.max_iter)
            )
        return params, result, digest

    params["bipartition"] = args.bipartition
    b = OddBipartition(frozenset(_load_json_list(args.bipartition, "part")))
    cert = sign_similarity(G, b)
    if not cert.certified:
        raise UsageError("sign similarity failed to certify")
    Q, L = signless_laplacian(G), laplacian(G)
    qpair = nqz_spectral_radius(Q, args.tol, args.max_iter)
    lpair = transport_eigenpair(qpair, cert.similarity, Q, L)
    result = _eigenreport("L", lpair)
    result["source"] = _eigenreport("Q", qpair)
    result["S"] = [int(s) for s in cert.similarity.signs()]
    return params, result, digest


def cmd_components(args) -> tuple[dict, dict, str | None]:
    G, digest = _load_graph(args.input)
    comps = connected_components(G)
    result = {
        "count": len(comps),
        "blocks": [list(b) for b in comps.blocks],
        "edges_per_block": [H.m for H in comps.subgraphs],
    }
    return {}, result, digest


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddgraph",
        description="Odd-colorings, chromatic numbers and spectral certificates of r-graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="build the 2^q-chromatic odd-colorable construction")
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--t", type=int, required=True)
    gen.add_argument("--block-size", type=int, default=None)
    gen.add_argument(
        "--sample-cap", type=int, default=None, help="keep at most this many edges per pair family"
    )
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--out", default=None, help="HGR output path; the coloring goes to <stem>.coloring.json beside it"
    )
    gen.set_defaults(func=cmd_gen)

    color = sub.add_parser("color", help="odd-coloring, odd-bipartition or chromatic number")
    color.add_argument("mode", choices=["odd", "bipartite", "chromatic"])
    color.add_argument("--in", dest="input", required=True)
    color.add_argument("--budget-s", type=float, default=None)
    color.set_defaults(func=cmd_color)

    cert = sub.add_parser("certify", help="exact diagonal-similarity certificates")
    cert.add_argument("mode", choices=["symmetry", "lq", "sign"])
    cert.add_argument("--in", dest="input", required=True)
    cert.add_argument("--coloring", default=None, help="JSON array with phi(1..n)")
    cert.add_argument("--bipartition", default=None, help="JSON array with the vertices of V1")
    cert.set_defaults(func=cmd_certify)

    spectral = sub.add_parser("spectral", help="spectral radius, dimension-2 spectrum, transport")
    spectral.add_argument("mode", choices=["radius", "spectrum", "transport"])
    spectral.add_argument("--in", dest="input", required=True)
    spectral.add_argument("--matrix", choices=["A", "Q"], default="Q")
    spectral.add_argument("--tol", type=float, default=1e-10)
    spectral.add_argument("--max-iter", type=int, default=100_000)
    spectral.add_argument("--cluster-tol", type=float, default=ROOT_CLUSTER_TOL)
    spectral.add_argument("--per-component", action="store_true")
    spectral.add_argument("--bipartition", default=None)
    spectral.set_defaults(func=cmd_spectral)

    comp = sub.add_parser("components", help="connected components")
    comp.add_argument("--in", dest="input", required=True)
    comp.set_defaults(func=cmd_components)
    return parser


def _fail(code: int, message: str) -> int:
    print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "spectral" and args.mode == "transport" and not args.bipartition:
        parser.error("spectral transport requires --bipartition")
    start = time.perf_counter()
    try:
        params, result, digest = args.func(args)
    except ConvergenceError as exc:
        return _fail(3, str(exc))
    except ReducibleTensorError as exc:
        return _fail(2, f"{exc}; rerun with --per-component")
    except (
        UsageError,
        HypergraphError,
        TensorError,
        InvalidColoringError,
        OddUniformityError,
        ConstructionError,
        SimilarityError,
        UnicodeDecodeError,
    ) as exc:
        return _fail(2, str(exc))
    report = {
        "command": ["oddgraph", *argv],
        "input_digest": digest,
        "parameters": params,
        "result": result,
        "wall_time_s": round(time.perf_counter() - start, 6),
        "version": __version__,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
