"""Command-line front end.

Subcommands:
    generate    draw a block-cycle graph and its ground truth
    decompose   spectral decomposition, embedding table, scatter view
    detect      full pipeline: decompose, embed, cluster, bicommunities
    celegans    connectome analysis report
    eval        score detected bicommunities against ground truth

Every subcommand that takes randomness has a --seed and is byte-for-byte
reproducible.  Flags mirror config-file keys (--config, TOML or JSON); when
a config value conflicts with a flag, the config wins and a warning is
printed.  Exit codes: 0 success, 2 argument/config error, 3 data error,
4 numerical non-convergence.  BIMOD_THREADS caps worker threads.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ._threads import apply_thread_cap
from .bicommunity import build_edge_features, cluster_edges, bicommunity_record, \
    extract_bicommunities
from .celegans import run_celegans
from .errors import BimodError, ConfigError, ConvergenceError, ParseError, \
    ValidationError
from .graph import load_edge_list, save_edge_list
from .metrics import adjusted_rand_index, best_match_jaccard
from .modularity import build_modularity
from .spectral import baseline_symmetrized, classify_component, decompose
from .svgplot import color_for, matrix_svg, scatter_svg
from .synthgen import generate, load_spec

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NO_CONVERGENCE = 4


def _warn(msg):
    print(f"bimod: warning: {msg}", file=sys.stderr)


def _read_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a key/value table")
    return data


def _merge_config(args, keys):
    """Overlay config-file values onto parsed flags; config wins conflicts."""
    if getattr(args, "config", None) is None:
        return
    cfg = _read_config(args.config)
    unknown = set(cfg) - set(keys)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    defaults = args._defaults
    for key, value in cfg.items():
        current = getattr(args, key)
        if current != defaults[key] and current != value:
            _warn(f"config {key}={value!r} overrides flag value {current!r}")
        setattr(args, key, value)


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2) + "\n")


def _spectrum_entries(dec):
    return [{"index": c.index,
             "singular_value": float(c.singular_value),
             "signed_value": float(c.signed_value),
             "kind": classify_component(c)} for c in dec]


def _write_embedding_csv(path, g, dec):
    n_comp = len(dec)
    heads = [f"u_{k + 1}" for k in range(n_comp)] + \
            [f"v_{k + 1}" for k in range(n_comp)]
    lines = ["node,label," + ",".join(heads)]
    for i in range(g.n_nodes):
        vals = [repr(float(dec[k].u[i])) for k in range(n_comp)] + \
               [repr(float(dec[k].v[i])) for k in range(n_comp)]
        lines.append(f"{i},{g.label_of(i)}," + ",".join(vals))
    _write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Subcommands

def cmd_generate(args):
    _merge_config(args, ("out",))
    spec = load_spec(args.spec_config)
    g, edge_blocks, node_blocks = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    graph_path = out / "graph.tsv"
    save_edge_list(g, graph_path)
    truth_path = out / "truth.tsv"
    lines = ["# block-cycle ground truth: 'node <id> <block>' and "
             "'edge <src> <dst> <block>' records"]
    for i in range(g.n_nodes):
        lines.append(f"node {i} {node_blocks[i]}")
    for e in range(g.n_edges):
        lines.append(f"edge {g.src[e]} {g.dst[e]} {edge_blocks[e]}")
    _write_text(truth_path, "\n".join(lines) + "\n")
    print(f"wrote {graph_path} ({g.n_nodes} nodes, {g.n_edges} edges) and {truth_path}")
    return EXIT_OK


def _load_for_analysis(args):
    g = load_edge_list(args.graph_file)
    op = build_modularity(g, mode=args.mode)
    return g, op


def cmd_decompose(args):
    _merge_config(args, ("components", "seed", "format", "out", "mode", "baseline"))
    g, op = _load_for_analysis(args)
    if args.baseline:
        dec = baseline_symmetrized(g, args.components)
    else:
        dec = decompose(op, args.components, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = _spectrum_entries(dec)
    if args.format == "json":
        _write_json(out / "spectrum.json", {
            "mode": dec.mode,
            "iterations": dec.iterations,
            "residual": dec.residual,
            "components": entries,
        })
    else:
        lines = ["index,singular_value,signed_value,kind"]
        lines += [f"{e['index']},{e['singular_value']!r},{e['signed_value']!r},{e['kind']}"
                  for e in entries]
        _write_text(out / "spectrum.csv", "\n".join(lines) + "\n")
    _write_embedding_csv(out / "embedding.csv", g, dec)
    svg = scatter_svg(dec[0].u, dec[0].v, title="Leading component embedding",
                      x_label="u1 (sending)", y_label="v1 (receiving)")
    _write_text(out / "scatter.svg", svg)
    print(f"wrote spectrum, embedding and scatter to {out}")
    return EXIT_OK


def _node_order_by_cluster(g, assignment, n_clusters):
    """Group nodes by the cluster that dominates their incident edges."""
    majority = np.full(g.n_nodes, n_clusters, dtype=np.int64)
    for node in range(g.n_nodes):
        incident = np.concatenate([assignment[g.src == node],
                                   assignment[g.dst == node]])
        if incident.size:
            counts = np.bincount(incident, minlength=n_clusters)
            majority[node] = int(np.argmax(counts))
    return np.lexsort((np.arange(g.n_nodes), majority))


def cmd_detect(args):
    _merge_config(args, ("components", "clusters", "seed", "format", "out", "mode"))
    g, op = _load_for_analysis(args)
    dec = decompose(op, args.components)
    embedding = build_edge_features(g, dec, args.components)
    assignment = cluster_edges(embedding, args.clusters, seed=args.seed)
    bicoms = extract_bicommunities(g, op, assignment)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = [bicommunity_record(bc, g) for bc in bicoms]
    if args.format == "json":
        _write_json(out / "bicommunities.json", {
            "parameters": {"components": args.components, "clusters": args.clusters,
                           "seed": args.seed},
            "requested_clusters": args.clusters,
            "realized_clusters": len(bicoms),
            "spectrum": _spectrum_entries(dec),
            "bicommunities": records,
        })
    else:
        lines = ["rank,cluster_id,score,src,dst"]
        for rank, bc in enumerate(bicoms):
            for e in sorted(bc.edge_ids):
                lines.append(f"{rank},{bc.cluster_id},{bc.score!r},"
                             f"{g.src[e]},{g.dst[e]}")
        _write_text(out / "bicommunities.csv", "\n".join(lines) + "\n")
    order = _node_order_by_cluster(g, assignment, args.clusters)
    pos = np.empty(g.n_nodes, dtype=np.int64)
    pos[order] = np.arange(g.n_nodes)
    cells = [(int(pos[g.src[e]]), int(pos[g.dst[e]]), color_for(int(assignment[e])))
             for e in range(g.n_edges)]
    svg = matrix_svg(g.n_nodes, cells,
                     title="Adjacency by edge cluster (rows send, columns receive)")
    _write_text(out / "matrix.svg", svg)
    print(f"wrote {len(bicoms)} bicommunities and matrix view to {out}")
    return EXIT_OK


def cmd_celegans(args):
    _merge_config(args, ("components", "clusters", "seed", "out", "metadata"))
    report = run_celegans(args.edge_file, metadata_file=args.metadata,
                          n_components=args.components,
                          n_clusters=args.clusters, seed=args.seed)
    paths = report.write(args.out)
    mu1 = report.data["spectrum"][0]["singular_value"]
    print(f"n={report.graph.n_nodes} edges={report.graph.n_edges} mu1={mu1:.4f}; "
          f"wrote {', '.join(str(p) for p in paths)}")
    return EXIT_OK


def _read_truth(path):
    node_blocks, edge_blocks = {}, {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if fields[0] == "node" and len(fields) == 3:
                node_blocks[int(fields[1])] = int(fields[2])
            elif fields[0] == "edge" and len(fields) == 4:
                edge_blocks[(int(fields[1]), int(fields[2]))] = int(fields[3])
            else:
                raise ParseError("expected 'node <id> <block>' or "
                                 "'edge <src> <dst> <block>'", path, lineno)
    if not edge_blocks:
        raise ValidationError(f"{path}: no edge records in ground truth")
    return node_blocks, edge_blocks


def cmd_eval(args):
    with open(args.bicommunities, "r", encoding="utf-8") as fh:
        detected = json.load(fh)
    if isinstance(detected, list):
        records = detected
    else:
        records = detected.get("bicommunities")
    if not isinstance(records, list):
        raise ValidationError(f"{args.bicommunities}: no 'bicommunities' array found")
    node_blocks, edge_blocks = _read_truth(args.truth_file)

    predicted, actual = [], []
    missing = 0
    for rec in records:
        for src, dst in rec["edges"]:
            key = (int(src), int(dst))
            if key not in edge_blocks:
                missing += 1
                continue
            predicted.append(rec["cluster_id"])
            actual.append(edge_blocks[key])
    if missing:
        raise ValidationError(
            f"{missing} detected edges are absent from the ground truth")
    if len(actual) != len(edge_blocks):
        raise ValidationError(
            f"detection covers {len(actual)} of {len(edge_blocks)} ground-truth edges")
    ari = adjusted_rand_index(predicted, actual)

    blocks = {}
    for node, b in node_blocks.items():
        blocks.setdefault(b, set()).add(node)
    sides = []
    for rec in records:
        sides.append(set(rec["sending"]))
        sides.append(set(rec["receiving"]))
    if node_blocks and sides:
        node_jaccard = float(np.mean(best_match_jaccard(sides, list(blocks.values()))))
    else:
        node_jaccard = None

    metrics = {
        "edge_ari": ari,
        "node_jaccard": node_jaccard,
        "n_bicommunities": len(records),
        "n_truth_edge_blocks": len(set(edge_blocks.values())),
    }
    text = json.dumps(metrics, indent=2)
    print(text)
    if args.out is not None:
        _write_text(args.out, text + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser

def _add_common(sub, *, components=None, clusters=None, seed=None):
    if components is not None:
        sub.add_argument("-n", "--components", type=int, default=components,
                         help="number of spectral components (default %(default)s)")
    if clusters is not None:
        sub.add_argument("-k", "--clusters", type=int, default=clusters,
                         help="number of edge clusters (default %(default)s)")
    if seed is not None:
        sub.add_argument("--seed", type=int, default=seed,
                         help="random seed (default %(default)s)")
    sub.add_argument("--out", default=".", help="output directory (default: .)")
    sub.add_argument("--config", default=None,
                     help="TOML/JSON config file; keys mirror flags and win conflicts")


def _add_mode_flags(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--dense", dest="mode", action="store_const", const="dense",
                       help="force the dense operator")
    group.add_argument("--implicit", dest="mode", action="store_const",
                       const="implicit", help="force the implicit operator")
    sub.set_defaults(mode="auto")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bimod",
        description="Directed community detection through bimodularity.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("generate", help="draw a block-cycle graph")
    sub.add_argument("spec_config", help="TOML/JSON block-cycle spec")
    _add_common(sub)
    sub.set_defaults(func=cmd_generate, _sub=sub)

    sub = subs.add_parser("decompose", help="spectral decomposition of a graph")
    sub.add_argument("graph_file", help="edge list (tsv/csv/matrix-market)")
    _add_common(sub, components=2, seed=0)
    _add_mode_flags(sub)
    sub.add_argument("--baseline", action="store_true",
                     help="decompose the symmetrized operator instead")
    sub.add_argument("--format", choices=("json", "csv"), default="json",
                     help="spectrum output format (default %(default)s)")
    sub.set_defaults(func=cmd_decompose, _sub=sub)

    sub = subs.add_parser("detect", help="detect bicommunities")
    sub.add_argument("graph_file", help="edge list (tsv/csv/matrix-market)")
    _add_common(sub, components=2, clusters=8, seed=42)
    _add_mode_flags(sub)
    sub.add_argument("--format", choices=("json", "csv"), default="json",
                     help="bicommunity output format (default %(default)s)")
    sub.set_defaults(func=cmd_detect, _sub=sub)

    sub = subs.add_parser("celegans", help="full connectome analysis report")
    sub.add_argument("edge_file", help="labeled edge list")
    sub.add_argument("-m", "--metadata", default=None,
                     help="per-neuron category/position CSV")
    _add_common(sub, components=5, clusters=5, seed=42)
    sub.set_defaults(func=cmd_celegans, _sub=sub)

    sub = subs.add_parser("eval", help="score bicommunities against ground truth")
    sub.add_argument("bicommunities", help="bicommunities.json from detect")
    sub.add_argument("truth_file", help="truth.tsv from generate")
    sub.add_argument("--out", default=None, help="also write metrics JSON here")
    sub.set_defaults(func=cmd_eval, _sub=sub)

    return parser


def main(argv=None):
    apply_thread_cap()
    parser = build_parser()
    args = parser.parse_args(argv)
    # flag defaults live on the chosen subparser, not the root parser
    args._defaults = {key: args._sub.get_default(key)
                      for key in vars(args) if not key.startswith("_")}
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"bimod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"bimod: error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ParseError, ValidationError) as exc:
        print(f"bimod: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"bimod: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BimodError as exc:
        print(f"bimod: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
