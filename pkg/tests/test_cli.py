import csv
import json

import pytest

from dynlayout import (
    contiguous_assignment,
    generate,
    heavy_hex_127_device,
    line_device,
    parse_circuit,
    run_pipeline,
    star_topology,
)
from dynlayout.cli import main


def strip_runtime(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "runtime_ms"}


class TestRunPipeline:
    def test_modes_share_everything_but_layout_and_tiebreak(self):
        c = generate("random", 8, n_blocks=10, seed=2)
        dev = line_device(8)
        topo = star_topology(2)
        mc = contiguous_assignment(8, 2)
        routed_class, rep_class = run_pipeline(c, mc, topo, dev, mode="class", seed=3)
        routed_base, rep_base = run_pipeline(c, mc, topo, dev, mode="baseline", seed=3)
        assert rep_class.mode == "class" and rep_base.mode == "baseline"
        assert rep_class.operations == routed_class.circuit.count_ops()

    def test_deterministic_reports(self):
        c = generate("cc", 6)
        dev = line_device(6)
        topo = star_topology(2)
        mc = contiguous_assignment(6, 2)
        _, a = run_pipeline(c, mc, topo, dev, mode="class", seed=1)
        _, b = run_pipeline(c, mc, topo, dev, mode="class", seed=1)
        assert strip_runtime(a.to_dict()) == strip_runtime(b.to_dict())

    def test_unknown_mode_rejected(self):
        c = generate("dqft", 3)
        dev = line_device(4)
        with pytest.raises(ValueError):
            run_pipeline(c, contiguous_assignment(4, 2), star_topology(2), dev, mode="fast")

    def test_report_schema(self):
        c = generate("dqft", 4)
        dev = line_device(4)
        _, rep = run_pipeline(c, contiguous_assignment(4, 2), star_topology(2), dev)
        doc = json.loads(rep.to_json())
        assert doc["schema_version"] == 1
        for key in ("mode", "seed", "cost_mode", "operations", "depth", "iccs",
                    "swaps_inserted", "runtime_ms", "config"):
            assert key in doc


class TestGen:
    def test_emits_parseable_circuit(self, tmp_path):
        out = tmp_path / "c.qasm"
        assert main(["gen", "dqft", "--n", "6", "--out", str(out)]) == 0
        assert parse_circuit(out.read_text()) == generate("dqft", 6)

    def test_random_needs_seed_stability(self, tmp_path):
        a, b = tmp_path / "a.qasm", tmp_path / "b.qasm"
        main(["gen", "random", "--n", "5", "--blocks", "7", "--seed", "4", "--out", str(a)])
        main(["gen", "random", "--n", "5", "--blocks", "7", "--seed", "4", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_unknown_family_fails(self, capsys):
        assert main(["gen", "vqe", "--n", "4"]) == 2
        assert "error" in capsys.readouterr().err


class TestPlaceRoute:
    def test_place_then_route_uses_layout(self, tmp_path):
        circ = tmp_path / "c.qasm"
        lay = tmp_path / "layout.json"
        rep = tmp_path / "report.json"
        main(["gen", "cc", "--n", "6", "--out", str(circ)])
        assert main([
            "place", "--circuit", str(circ), "--k", "2", "--device", "line:6",
            "--emit-layout", str(lay),
        ]) == 0
        doc = json.loads(lay.read_text())
        assert sorted(doc["layout"]) == list(range(6))
        assert main([
            "route", "--circuit", str(circ), "--k", "2", "--device", "line:6",
            "--layout", str(lay), "--report", str(rep),
        ]) == 0
        report = json.loads(rep.read_text())
        assert report["mode"] == "class"
        assert report["operations"] > 0

    def test_route_auto_layout(self, tmp_path):
        rep = tmp_path / "report.json"
        assert main([
            "route", "--circuit", "dqft8", "--k", "2", "--device", "line:8",
            "--layout", "auto", "--report", str(rep),
        ]) == 0

    def test_layout_size_mismatch_fails(self, tmp_path):
        lay = tmp_path / "layout.json"
        lay.write_text(json.dumps({"layout": [0, 1]}))
        assert main([
            "route", "--circuit", "dqft8", "--k", "2", "--device", "line:8",
            "--layout", str(lay),
        ]) == 2

    def test_missing_circuit_file_fails(self, capsys):
        assert main(["place", "--circuit", "nope.qasm", "--k", "2"]) == 2
        assert "error" in capsys.readouterr().err


class TestTranspile:
    def test_token_shortcut_k1_zero_iccs(self, tmp_path):
        rep = tmp_path / "r.json"
        assert main([
            "transpile", "--circuit", "dqft12", "--k", "1",
            "--device", "line:12", "--report", str(rep),
        ]) == 0
        assert json.loads(rep.read_text())["iccs"] == 0

    def test_repeat_runs_identical_but_runtime(self, tmp_path):
        reps = []
        for name in ("a.json", "b.json"):
            rep = tmp_path / name
            assert main([
                "transpile", "--circuit", "cc8", "--k", "2", "--device", "line:8",
                "--mode", "baseline", "--seed", "5", "--report", str(rep),
            ]) == 0
            reps.append(json.loads(rep.read_text()))
        assert strip_runtime(reps[0]) == strip_runtime(reps[1])

    def test_topology_document(self, tmp_path):
        topo = tmp_path / "topo.json"
        topo.write_text(json.dumps({
            "controllers": {"kind": "star_via_router", "k": 2},
            "device": {"kind": "line", "m": 8},
            "assignment": "contiguous",
        }))
        rep = tmp_path / "r.json"
        assert main([
            "transpile", "--circuit", "dqft8", "--topology", str(topo),
            "--report", str(rep),
        ]) == 0
        assert json.loads(rep.read_text())["config"]["k_controllers"] == 2


class TestOracleCmd:
    def test_fig4_instance(self, tmp_path, capsys):
        assert main(["oracle", "--circuit", "dqft4", "--k", "2", "--device", "line:4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["cost"] == 2

    def test_oversized_fails_cleanly(self, capsys):
        assert main(["oracle", "--circuit", "dqft30", "--k", "4"]) == 2
        assert "error" in capsys.readouterr().err


class TestSweep:
    def test_grid_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main([
            "sweep", "--benchmarks", "dqft6,cc6", "--k-values", "2", "--seeds", "0..1",
            "--device", "line:6", "--out", str(out),
        ]) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 4
        assert {r["benchmark"] for r in rows} == {"dqft6", "cc6"}
        for row in rows:
            assert row["error"] == ""
            assert int(row["class_iccs"]) >= 0
            assert int(row["baseline_operations"]) > 0

    def test_single_cell_matches_transpile(self, tmp_path):
        out = tmp_path / "sweep.csv"
        main([
            "sweep", "--benchmarks", "dqft8", "--k-values", "2", "--seeds", "3",
            "--device", "line:8", "--out", str(out),
        ])
        row = next(csv.DictReader(out.open()))
        for mode, col in (("class", "class_iccs"), ("baseline", "baseline_iccs")):
            rep = tmp_path / f"{mode}.json"
            main([
                "transpile", "--circuit", "dqft8", "--k", "2", "--device", "line:8",
                "--mode", mode, "--seed", "3", "--report", str(rep),
            ])
            assert json.loads(rep.read_text())["iccs"] == int(row[col])

    def test_partial_failure_recorded(self, tmp_path):
        out = tmp_path / "sweep.csv"
        # second benchmark is bogus: its cells must carry errors, run continues
        assert main([
            "sweep", "--benchmarks", "dqft6,nosuch", "--k-values", "2", "--seeds", "0",
            "--device", "line:6", "--out", str(out),
        ]) == 1
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 2
        good = [r for r in rows if not r["error"]]
        bad = [r for r in rows if r["error"]]
        assert len(good) == 1 and len(bad) == 1

    def test_parallel_jobs_match_serial(self, tmp_path):
        serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
        args = ["sweep", "--benchmarks", "cc6", "--k-values", "2,3", "--seeds", "0..1",
                "--device", "line:6"]
        main(args + ["--out", str(serial)])
        main(args + ["--jobs", "4", "--out", str(parallel)])

        def stable(path):
            rows = list(csv.DictReader(path.open()))
            drop = ("class_runtime_ms", "baseline_runtime_ms")
            return [{k: v for k, v in r.items() if k not in drop} for r in rows]

        assert stable(serial) == stable(parallel)
