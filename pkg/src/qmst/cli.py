"""Command-line interface: generate instances, verify encodings, run protocols.

Subcommands
-----------
generate   sample a seeded random connected graph to a JSON file
verify     encode a graph and cross-check the brute-force optimum vs Kruskal
run        run one protocol variant; write CSV tables, a JSON summary, figures
compare    run several variants on one instance and budget; write a merged
           convergence table, a cross-variant report, and overlay figures

All failures print a diagnostic to stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiment import (
    build_protocol_config,
    f17,
    prepare_problem,
    report_dict,
    run_variant,
    summary_dict,
    write_convergence_csv,
    write_distribution_csv,
    write_json,
    write_merged_convergence_csv,
)
from .graphs import generate_random_graph, load_graph, save_graph
from .protocols import ControlShape, Variant
from .qubo import qubo_to_json

VARIANT_NAMES = [v.value for v in Variant]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmst",
        description="Spanning-tree QUBO encoding with feedback-driven protocol simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a random connected graph")
    gen.add_argument("--n", type=int, required=True, help="number of vertices (>= 2)")
    gen.add_argument("--p", type=float, default=0.5, help="edge keep probability")
    gen.add_argument("--wmin", type=float, default=1.0, help="lower weight bound")
    gen.add_argument("--wmax", type=float, default=10.0, help="upper weight bound")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output graph JSON path")
    gen.set_defaults(func=_cmd_generate)

    ver = sub.add_parser("verify", help="check the encoding against Kruskal")
    ver.add_argument("--graph", required=True, help="graph JSON path")
    ver.add_argument("--qubit-cap", type=int, default=24)
    ver.add_argument("--export-qubo", help="also write the QUBO model as JSON")
    ver.set_defaults(func=_cmd_verify)

    run = sub.add_parser("run", help="run one protocol variant")
    _add_run_options(run)
    run.add_argument("--variant", choices=VARIANT_NAMES, required=True)
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser("compare", help="run several variants on one instance")
    _add_run_options(cmp_)
    cmp_.add_argument(
        "--variant",
        dest="variants",
        choices=VARIANT_NAMES,
        action="append",
        help="repeat for each variant (at least two)",
    )
    cmp_.set_defaults(func=_cmd_compare)

    return parser


def _add_run_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--graph", required=True, help="graph JSON path")
    sub.add_argument("--dt", type=float, default=0.02, help="layer step size")
    sub.add_argument("--layers", type=int, default=500, help="layer budget")
    sub.add_argument("--tr-a", type=float, default=2.0, help="clock compression factor")
    sub.add_argument(
        "--tr-tf",
        type=float,
        default=None,
        help="total rescaled time (default: layers * dt)",
    )
    sub.add_argument(
        "--shape",
        default="identity",
        help="drive response: identity, tanh, or tanh:<scale>",
    )
    sub.add_argument("--top-n", type=int, default=20, help="distribution rows to keep")
    sub.add_argument("--drivers", choices=["x", "xy"], default="x",
                     help="multi-drive set: per-qubit X, or X plus Y")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--no-plots", action="store_true", help="skip figure rendering")


def _cmd_generate(args) -> int:
    g = generate_random_graph(args.n, args.p, args.wmin, args.wmax, args.seed)
    save_graph(g, args.out)
    print(f"wrote {args.out}: {g.num_vertices} vertices, {len(g.edges)} edges, root {g.root}")
    return 0


def _cmd_verify(args) -> int:
    g = load_graph(args.graph)
    problem = prepare_problem(g, max_qubits=args.qubit_cap)
    print(f"graph: {args.graph}")
    print(f"vertices: {g.num_vertices}  edges: {len(g.edges)}  root: {g.root}")
    print(f"qubits: {problem.registry.n_vars}")
    print(f"penalty: {f17(problem.penalty)}")
    print(f"kruskal_cost: {f17(problem.mst_cost)}")
    print(f"brute_force_min: {f17(problem.e_min)}")
    print(f"ground_states: {problem.ground_indices.size}")
    print(f"match: {str(problem.encoding_sound).lower()}")
    if args.export_qubo:
        Path(args.export_qubo).write_text(
            json.dumps(qubo_to_json(problem.model, problem.registry), indent=2) + "\n"
        )
        print(f"qubo written to {args.export_qubo}")
    return 0


def _resolve_config(args, variant_name: str):
    return build_protocol_config(
        Variant(variant_name),
        dt=args.dt,
        layers=args.layers,
        tr_a=args.tr_a,
        tr_tf=args.tr_tf,
        shape=ControlShape.parse(args.shape),
    )


def _cmd_run(args) -> int:
    g = load_graph(args.graph)
    problem = prepare_problem(g)
    cfg = _resolve_config(args, args.variant)
    include_y = args.drivers == "xy"
    outcome = run_variant(problem, cfg, include_y=include_y, top_n=args.top_n)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_convergence_csv(out / "convergence.csv", outcome.trace)
    write_distribution_csv(out / "distribution.csv", outcome.top_rows)
    write_json(
        out / "summary.json",
        summary_dict(
            problem, outcome, graph_path=args.graph, top_n=args.top_n, include_y=include_y
        ),
    )
    if not args.no_plots:
        from . import plotting

        plotting.save_convergence_plot(
            out / "convergence.png",
            [(cfg.variant.value, outcome.trace.layers, outcome.trace.energies)],
            e_min=problem.e_min,
        )
        plotting.save_distribution_plot(
            out / "distribution.png", outcome.top_rows, title=cfg.variant.value
        )
    print(
        f"{cfg.variant.value}: layers {cfg.num_layers}, "
        f"final energy {outcome.trace.final_energy:.6f}, "
        f"ground probability {outcome.ground_probability:.6f}, "
        f"mst rank {outcome.mst_rank}"
    )
    print(f"outputs in {out}")
    return 0


def _cmd_compare(args) -> int:
    if not args.variants or len(args.variants) < 2:
        raise ValueError("compare needs at least two --variant flags")
    if len(set(args.variants)) != len(args.variants):
        raise ValueError("compare variants must be distinct")
    g = load_graph(args.graph)
    problem = prepare_problem(g)
    include_y = args.drivers == "xy"

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outcomes = {}
    file_refs: dict[str, dict[str, str]] = {}
    for name in args.variants:
        cfg = _resolve_config(args, name)
        outcome = run_variant(problem, cfg, include_y=include_y, top_n=args.top_n)
        outcomes[name] = outcome
        sub = out / name
        sub.mkdir(parents=True, exist_ok=True)
        write_convergence_csv(sub / "convergence.csv", outcome.trace)
        write_distribution_csv(sub / "distribution.csv", outcome.top_rows)
        file_refs[name] = {
            "convergence": str(Path(name) / "convergence.csv"),
            "distribution": str(Path(name) / "distribution.csv"),
        }
        print(
            f"{name}: layers {cfg.num_layers}, "
            f"final energy {outcome.trace.final_energy:.6f}, "
            f"ground probability {outcome.ground_probability:.6f}, "
            f"mst rank {outcome.mst_rank}"
        )

    write_merged_convergence_csv(out / "convergence_merged.csv", outcomes)
    write_json(
        out / "report.json",
        report_dict(
            problem,
            outcomes,
            graph_path=args.graph,
            top_n=args.top_n,
            include_y=include_y,
            file_refs=file_refs,
        ),
    )
    if not args.no_plots:
        from . import plotting

        plotting.save_convergence_plot(
            out / "convergence.png",
            [(name, o.trace.layers, o.trace.energies) for name, o in outcomes.items()],
            e_min=problem.e_min,
        )
        for name, o in outcomes.items():
            plotting.save_distribution_plot(
                out / name / "distribution.png", o.top_rows, title=name
            )
    print(f"outputs in {out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
