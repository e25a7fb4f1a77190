"""Command-line interface.

Subcommands cover the full pipeline: generate benchmark graphs, cluster
them, inspect spectra, embed vertices, estimate operators from walks,
evaluate clusterings, and reorder adjacency matrices. Every command is
seeded (flag --seed, fallback env TOSCA_SEED, default 0) and writes
deterministic artifacts: same argv, same output bytes. Exit codes:
2 usage, 3 data, 4 numerical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import galerkin, generators, graph as graph_io
from .baselines import ddbs_cluster, herm_cluster
from .clustering import Clustering, KMeansConfig, kmeans
from .datadriven import (
    estimated_operators,
    empirical_grams,
    read_walks,
    sample_pairs,
    sample_trajectory,
    write_walks,
)
from .errors import LengthMismatchError, ToscaError
from .graph import Graph, add_self_loops, read_edge_list, read_matrix_market, transition_matrix
from .metrics import adjusted_rand_index, contingency_table, misclassified_fraction
from .operators import Density, stationary_density, uniform_density
from .spectral import embed_coordinates, fb_spectrum, spectral_gap

__all__ = ["main"]


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _default_seed() -> int:
    return int(os.environ.get("TOSCA_SEED", "0"))


def _load_graph(path: str) -> Graph:
    with open(path) as fh:
        first = fh.readline()
    if first.lower().startswith("%%matrixmarket"):
        return read_matrix_market(path)
    return read_edge_list(path)


def _resolve_mu(spec: str, g: Graph) -> Density:
    if spec == "uniform":
        return uniform_density(g.n)
    if spec == "stationary":
        return stationary_density(g)
    masses = np.loadtxt(spec, ndmin=1)
    if len(masses) != g.n:
        raise LengthMismatchError(
            f"density file has {len(masses)} entries for {g.n} vertices"
        )
    total = masses.sum()
    if total <= 0.0 or (masses < 0.0).any():
        raise ToscaError("density file must hold nonnegative masses with positive sum")
    return Density(masses / total)


def _prepare(args) -> Graph:
    g = _load_graph(args.graph)
    if args.self_loops is not None:
        g = add_self_loops(g, args.self_loops)
    return g


def _write_labels(path: str, clustering: Clustering, seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"# seed={seed}\n")
        fh.write("vertex_index,label\n")
        for i, label in enumerate(clustering.labels):
            fh.write(f"{i},{int(label)}\n")


def _read_labels(path: str) -> np.ndarray:
    pairs = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if stripped == "vertex_index,label":
                continue
            vertex, label = stripped.split(",")
            pairs.append((int(vertex), int(label)))
    pairs.sort()
    return np.asarray([label for _, label in pairs], dtype=np.int64)


def _emit(args, summary: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")


def _cmd_generate(args) -> int:
    e = generators.read_prob_matrix(args.probs)
    params = generators.DSBMParams(
        r_b=args.blocks, n_b=args.block_size, e=e, weight=args.weight, seed=args.seed
    )
    g = generators.dsbm_sample(params)
    comments = [f"seed={args.seed}"]
    if args.mtx:
        graph_io.write_matrix_market(g, args.output, comments=comments)
    else:
        graph_io.write_edge_list(g, args.output, comments=comments)
    _emit(args, {"n": g.n, "edges": g.num_edges, "seed": args.seed, "output": args.output})
    return 0


def _cmd_cluster(args) -> int:
    start = time.perf_counter()
    g = _prepare(args)
    cfg = KMeansConfig(restarts=args.restarts, seed=args.seed)
    summary: dict = {"method": args.method, "k": args.k, "seed": args.seed}
    if args.method == "fb":
        mu = _resolve_mu(args.mu, g)
        spec = fb_spectrum(transition_matrix(g), mu, args.k)
        feats = {"phi": spec.phi, "psi": spec.psi,
                 "both": np.hstack([spec.phi, spec.psi])}[args.use]
        if args.drop_first:
            feats = feats[:, 1:]
        clustering = kmeans(feats, args.k, cfg)
        summary["kappa"] = [float(x) for x in spec.kappa]
        summary["lambda"] = [float(x) for x in spec.lam]
    elif args.method == "ddbs":
        clustering = ddbs_cluster(g, args.k, cfg)
    else:
        clustering = herm_cluster(g, args.k, cfg)
    _write_labels(args.output, clustering, args.seed)
    summary["inertia"] = clustering.inertia
    summary["wall_time_s"] = time.perf_counter() - start
    summary["output"] = args.output
    _emit(args, summary)
    return 0


def _cmd_spectrum(args) -> int:
    start = time.perf_counter()
    g = _prepare(args)
    mu = _resolve_mu(args.mu, g)
    spec = fb_spectrum(transition_matrix(g), mu, args.num)
    with open(args.output, "w") as fh:
        fh.write(f"# seed={args.seed}\n")
        fh.write("l,kappa,lambda\n")
        for i, (kappa, lam) in enumerate(zip(spec.kappa, spec.lam), start=1):
            fh.write(f"{i},{_fmt(kappa)},{_fmt(lam)}\n")
    summary = {
        "seed": args.seed,
        "num": args.num,
        "kappa": [float(x) for x in spec.kappa],
        "lambda": [float(x) for x in spec.lam],
        "suggested_k": spectral_gap(spec.lam, args.num),
        "wall_time_s": time.perf_counter() - start,
        "output": args.output,
    }
    _emit(args, summary)
    return 0


def _cmd_embed(args) -> int:
    g = _prepare(args)
    mu = _resolve_mu(args.mu, g)
    dims = [int(d) for d in args.coords.split(",") if d]
    if not dims:
        raise ValueError("--coords needs at least one eigenfunction index")
    spec = fb_spectrum(transition_matrix(g), mu, max(dims))
    coords = embed_coordinates(spec, dims)
    with open(args.output, "w") as fh:
        fh.write(f"# seed={args.seed}\n")
        fh.write("vertex_index," + ",".join(f"phi_{d}" for d in dims) + "\n")
        for i, row in enumerate(coords):
            fh.write(f"{i}," + ",".join(_fmt(x) for x in row) + "\n")
    _emit(args, {"seed": args.seed, "dims": dims, "output": args.output})
    return 0


def _cmd_estimate(args) -> int:
    start = time.perf_counter()
    if args.walks:
        sample = read_walks(args.walks)
        n = int(max(sample.xs.max(), sample.ys.max())) + 1 if sample.m else 0
    else:
        g = _prepare(args)
        mu = _resolve_mu(args.mu, g)
        s = transition_matrix(g)
        if args.mode == "trajectory":
            sample = sample_trajectory(s, mu, args.walkers, args.seed)
        else:
            sample = sample_pairs(s, mu, args.walkers, args.seed)
        n = g.n
    sets = galerkin.read_partition(args.basis)
    max_vertex = max(max(group) for group in sets)
    basis = galerkin.indicator_basis(max(n, max_vertex + 1), sets)
    grams = empirical_grams(sample, basis)
    est = estimated_operators(grams, args.ridge)
    eigenvalues = np.sort(np.linalg.eigvals(est.f).real)[::-1]
    payload = {
        "seed": sample.seed,
        "mode": sample.mode,
        "m": sample.m,
        "r": basis.r,
        "eigenvalues": [float(x) for x in eigenvalues],
        "k_r": est.k.tolist(),
        "t_r": est.t.tolist(),
        "f_r": est.f.tolist(),
        "b_r": est.b.tolist(),
    }
    with open(args.output, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.save_walks:
        write_walks(sample, args.save_walks)
    _emit(
        args,
        {
            "seed": sample.seed,
            "m": sample.m,
            "eigenvalues": payload["eigenvalues"],
            "wall_time_s": time.perf_counter() - start,
            "output": args.output,
        },
    )
    return 0


def _cmd_eval(args) -> int:
    labels = _read_labels(args.labels)
    truth = _read_labels(args.truth)
    metrics = {
        "ari": adjusted_rand_index(labels, truth),
        "nmv": misclassified_fraction(labels, truth),
        "confusion": contingency_table(labels, truth).counts.tolist(),
    }
    text = json.dumps(metrics, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return 0


def _cmd_reorder(args) -> int:
    g = _load_graph(args.graph)
    labels = _read_labels(args.labels)
    reordered, perm = graph_io.reorder_by_cluster(g, labels)
    graph_io.write_matrix_market(reordered, args.output, comments=[f"seed={args.seed}"])
    if args.perm:
        with open(args.perm, "w") as fh:
            fh.write(f"# seed={args.seed}\n")
            fh.write("new_index,old_index\n")
            for new, old in enumerate(perm):
                fh.write(f"{new},{int(old)}\n")
    _emit(args, {"seed": args.seed, "output": args.output, "perm": args.perm})
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=_default_seed())
    parser.add_argument("--json", action="store_true", help="machine-readable summary")


def _add_graph_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("graph", help="edge-list TSV or Matrix Market file")
    parser.add_argument("--self-loops", type=float, default=None, metavar="W",
                        help="add W to every diagonal entry before processing")
    parser.add_argument("--mu", default="uniform",
                        help="start density: uniform, stationary, or a file of masses")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tosca",
        description="Transfer-operator spectral clustering toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample benchmark graphs")
    gen_sub = gen.add_subparsers(dest="generator", required=True)
    dsbm = gen_sub.add_parser("dsbm", help="directed stochastic block model")
    dsbm.add_argument("--blocks", type=int, required=True)
    dsbm.add_argument("--block-size", type=int, required=True)
    dsbm.add_argument("--probs", required=True, help="CSV block probability matrix")
    dsbm.add_argument("--weight", type=float, default=1.0)
    dsbm.add_argument("--mtx", action="store_true", help="write Matrix Market instead of TSV")
    dsbm.add_argument("-o", "--output", required=True)
    _add_common(dsbm)
    dsbm.set_defaults(func=_cmd_generate)

    cluster = sub.add_parser("cluster", help="spectral clustering")
    _add_graph_options(cluster)
    cluster.add_argument("-k", type=int, required=True)
    cluster.add_argument("--method", choices=["fb", "ddbs", "herm"], default="fb")
    cluster.add_argument("--use", choices=["phi", "psi", "both"], default="phi")
    cluster.add_argument("--drop-first", action="store_true",
                         help="drop the constant eigenfunction before k-means")
    cluster.add_argument("--restarts", type=int, default=10)
    cluster.add_argument("-o", "--output", required=True)
    _add_common(cluster)
    cluster.set_defaults(func=_cmd_cluster)

    spectrum = sub.add_parser("spectrum", help="singular values / eigenvalues")
    _add_graph_options(spectrum)
    spectrum.add_argument("--num", type=int, required=True)
    spectrum.add_argument("-o", "--output", required=True)
    _add_common(spectrum)
    spectrum.set_defaults(func=_cmd_spectrum)

    embed = sub.add_parser("embed", help="eigenfunction coordinates per vertex")
    _add_graph_options(embed)
    embed.add_argument("--coords", default="2,3",
                       help="comma-separated 1-based eigenfunction indices")
    embed.add_argument("-o", "--output", required=True)
    _add_common(embed)
    embed.set_defaults(func=_cmd_embed)

    estimate = sub.add_parser("estimate", help="operators from random-walk data")
    estimate.add_argument("graph", nargs="?", default=None)
    estimate.add_argument("--self-loops", type=float, default=None, metavar="W")
    estimate.add_argument("--mu", default="uniform")
    estimate.add_argument("--walkers", type=int, default=10000)
    estimate.add_argument("--mode", choices=["pairs", "trajectory"], default="pairs")
    estimate.add_argument("--walks", default=None,
                          help="walk-pair CSV; skips sampling (graph not needed)")
    estimate.add_argument("--basis", required=True, help="partition CSV")
    estimate.add_argument("--ridge", type=float, default=None)
    estimate.add_argument("--save-walks", default=None)
    estimate.add_argument("-o", "--output", required=True)
    _add_common(estimate)
    estimate.set_defaults(func=_cmd_estimate)

    ev = sub.add_parser("eval", help="compare two label files")
    ev.add_argument("labels")
    ev.add_argument("truth")
    ev.add_argument("-o", "--output", default=None)
    _add_common(ev)
    ev.set_defaults(func=_cmd_eval)

    reorder = sub.add_parser("reorder", help="permute vertices by cluster label")
    reorder.add_argument("graph")
    reorder.add_argument("labels")
    reorder.add_argument("-o", "--output", required=True)
    reorder.add_argument("--perm", default=None, help="write permutation CSV here")
    _add_common(reorder)
    reorder.set_defaults(func=_cmd_reorder)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "estimate" and args.graph is None and args.walks is None:
        parser.error("estimate needs a graph or --walks")
    try:
        return args.func(args)
    except ToscaError as exc:
        print(f"tosca {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, ValueError) as exc:
        print(f"tosca {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
