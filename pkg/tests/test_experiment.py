import csv
import json

import numpy as np
import pytest

from qmst.experiment import (
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
from qmst.graphs import generate_random_graph
from qmst.protocols import Variant
from qmst.qubo import bits_to_index


def small_outcome(problem, variant, layers=30, **kw):
    cfg = build_protocol_config(variant, layers=layers, **kw)
    return run_variant(problem, cfg)


def test_f17_round_trips_floats():
    for x in (1 / 3, 0.1, 2.0 ** -40, 123456.789, 0.0):
        assert float(f17(x)) == x


def test_prepare_problem_triangle_fields(triangle_problem):
    p = triangle_problem
    assert p.registry.n_vars == 5
    assert p.penalty == 7.0
    assert p.mst_edges == frozenset({(0, 1), (1, 2)})
    assert p.mst_cost == pytest.approx(3.0)
    assert p.e_min == pytest.approx(3.0)
    assert list(p.ground_indices) == [21]
    assert p.encoding_sound


def test_prepare_problem_sound_on_seeded_instances():
    for seed in range(3):
        g = generate_random_graph(4, 1.0, 1.0, 5.0, seed)
        assert prepare_problem(g).encoding_sound


def test_build_protocol_config_budgets():
    cfg = build_protocol_config(Variant.ONE_DRIVE)
    assert (cfg.dt, cfg.num_layers, cfg.tr_a, cfg.tr_tf) == (0.02, 500, None, None)
    # rescaled runs default their total time to the plain budget and then
    # only keep the layers that fit the compressed window
    tr = build_protocol_config(Variant.TR_MULTI_DRIVE)
    assert (tr.num_layers, tr.tr_a, tr.tr_tf) == (250, 2.0, 10.0)
    stretched = build_protocol_config(Variant.TR_MULTI_DRIVE, tr_a=1.25, tr_tf=12.5)
    assert stretched.num_layers == 500
    with pytest.raises(ValueError):
        build_protocol_config(Variant.TR_ONE_DRIVE, tr_a=2.0, tr_tf=0.01)


def test_run_variant_distribution_bookkeeping(triangle_problem):
    out = small_outcome(triangle_problem, Variant.ONE_DRIVE, layers=120)
    rows = out.top_rows
    assert len(rows) == 20
    probs = [r.probability for r in rows]
    assert probs == sorted(probs, reverse=True)
    assert sum(probs) <= 1.0 + 1e-9
    h = triangle_problem.hamiltonian
    for r in rows:
        z = bits_to_index([int(c) for c in r.bitstring])
        assert r.energy == h.energies[z]
        clean = (
            r.order_violations == r.edge_order_violations == r.connectivity_violations == 0
        )
        if r.decodes_to_mst:
            assert clean
    assert out.mst_rank >= 1
    mst_rows = [r for r in rows if r.decodes_to_mst]
    if mst_rows:
        assert out.ground_probability == pytest.approx(mst_rows[0].probability)


def test_run_variant_rejects_bad_top_n(triangle_problem):
    cfg = build_protocol_config(Variant.ONE_DRIVE, layers=5)
    with pytest.raises(ValueError):
        run_variant(triangle_problem, cfg, top_n=0)


def test_top_n_caps_at_basis_size(triangle_problem):
    out = run_variant(
        triangle_problem, build_protocol_config(Variant.ONE_DRIVE, layers=5), top_n=100
    )
    assert len(out.top_rows) == 32


def test_convergence_csv_round_trips(tmp_path, triangle_problem):
    out = small_outcome(triangle_problem, Variant.MULTI_DRIVE, layers=25)
    path = tmp_path / "conv.csv"
    write_convergence_csv(path, out.trace)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    n_drv = out.trace.n_drivers
    assert rows[0] == (
        ["layer", "energy"]
        + [f"beta_{j}" for j in range(n_drv)]
        + [f"a_{j}" for j in range(n_drv)]
    )
    assert len(rows) == 26
    for i, row in enumerate(rows[1:]):
        assert int(row[0]) == i + 1
        assert float(row[1]) == out.trace.energies[i]
        for j in range(n_drv):
            assert float(row[2 + j]) == out.trace.betas[i, j]
            assert float(row[2 + n_drv + j]) == out.trace.a_values[i, j]


def test_distribution_csv_round_trips(tmp_path, triangle_problem):
    out = small_outcome(triangle_problem, Variant.ONE_DRIVE, layers=25)
    path = tmp_path / "dist.csv"
    write_distribution_csv(path, out.top_rows)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(out.top_rows)
    for parsed, original in zip(rows, out.top_rows):
        assert parsed["bitstring"] == original.bitstring
        assert len(parsed["bitstring"]) == 5
        assert float(parsed["probability"]) == original.probability
        assert float(parsed["energy"]) == original.energy
        assert parsed["decodes_to_mst"] in ("true", "false")


def test_merged_csv_pads_shorter_runs(tmp_path, triangle_problem):
    long_run = small_outcome(triangle_problem, Variant.ONE_DRIVE, layers=30)
    short_run = small_outcome(triangle_problem, Variant.TR_MULTI_DRIVE, layers=30, tr_a=2.0)
    assert short_run.trace.layers.size == 15
    path = tmp_path / "merged.csv"
    write_merged_convergence_csv(path, {"one-drive": long_run, "tr-multi-drive": short_run})
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["layer", "energy_one-drive", "energy_tr-multi-drive"]
    assert len(rows) == 31
    assert rows[15][2] != ""
    assert all(row[2] == "" for row in rows[16:])
    assert all(row[1] != "" for row in rows[1:])


def test_summary_and_report_payloads(tmp_path, triangle_problem):
    out = small_outcome(triangle_problem, Variant.TR_ONE_DRIVE, layers=20, tr_a=1.5)
    summary = summary_dict(
        triangle_problem, out, graph_path="g.json", top_n=20, include_y=False
    )
    assert summary["config"]["variant"] == "tr-one-drive"
    assert summary["config"]["tr_a"] == 1.5
    assert summary["problem"]["n_qubits"] == 5
    assert summary["problem"]["encoding_sound"] is True
    assert summary["final_energy"] == out.trace.final_energy
    report = report_dict(
        triangle_problem,
        {"tr-one-drive": out},
        graph_path=None,
        top_n=20,
        include_y=False,
        file_refs={"tr-one-drive": {"convergence": "x.csv"}},
    )
    assert report["variants"]["tr-one-drive"]["files"] == {"convergence": "x.csv"}
    path = tmp_path / "report.json"
    write_json(path, report)
    assert json.loads(path.read_text())["problem"]["root"] == 0


def test_mst_rank_tracks_probability_order(calm_k4_problem):
    out = small_outcome(calm_k4_problem, Variant.MULTI_DRIVE, layers=200)
    probs = np.abs(out.trace.final_state.amplitudes) ** 2
    best = [int(z) for z in calm_k4_problem.ground_indices]
    target = max(probs[z] for z in best)
    # rank counts states strictly more probable than the best solution state,
    # plus ties that argsort placed ahead of it
    assert out.mst_rank >= 1 + int(np.sum(probs > target))
