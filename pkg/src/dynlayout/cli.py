"""Command-line surface: gen, place, route, transpile, sweep, oracle.

Circuits are passed either as files in the text grammar or as benchmark
tokens like ``dqft20``, ``pe20``, ``cc12``, ``random20`` (``random20x40``
pins the block count).  Topology comes from a JSON document (see
control.load_topology) or from the ``--k/--device/--controllers`` shortcuts.
Every command is deterministic for a fixed argument vector; reports repeat
byte-for-byte except the runtime fields.
"""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .benchgen import GENERATORS, generate
from .circuit import CircuitError
from .cidq import COST_MODES, extract_cidq_sets, total_cost_L
from .control import (
    ConfigError,
    LogicalPhysicalMap,
    contiguous_assignment,
    grid_device,
    heavy_hex_127_device,
    line_device,
    load_topology,
    star_topology,
    star_via_router_topology,
)
from .oracle import InstanceTooLarge, brute_force_placement
from .pipeline import MODES, run_pipeline
from .placement import initial_placement
from .qasm import ParseError, parse_circuit, serialize_circuit

LAYOUT_SCHEMA_VERSION = 1

_BENCH_RE = re.compile(r"^(dqft|ipe|pe|cc|random)(\d+)(?:x(\d+))?$")


class CliError(Exception):
    pass


def _load_circuit(token: str, seed: int = 0):
    m = _BENCH_RE.match(token)
    if m:
        family, n, blocks = m.group(1), int(m.group(2)), m.group(3)
        if blocks is not None and family != "random":
            raise CliError(f"block-count suffix only applies to random benchmarks: {token!r}")
        return generate(family, n, n_blocks=int(blocks) if blocks else None, seed=seed)
    path = Path(token)
    if not path.exists():
        raise CliError(f"{token!r} is neither a benchmark token nor an existing file")
    return parse_circuit(path.read_text())


def _parse_device(token: str):
    if token == "heavy_hex_127":
        return heavy_hex_127_device()
    m = re.match(r"^line:(\d+)$", token)
    if m:
        return line_device(int(m.group(1)))
    m = re.match(r"^grid:(\d+)x(\d+)$", token)
    if m:
        return grid_device(int(m.group(1)), int(m.group(2)))
    raise CliError(f"unknown device {token!r} (use heavy_hex_127, line:M, or grid:RxC)")


def _load_setup(args):
    """Resolve (topology, device, assignment) from --topology or shortcuts."""
    if args.topology:
        return load_topology(args.topology)
    if args.k is None:
        raise CliError("either --topology or --k is required")
    device = _parse_device(args.device)
    if args.controllers == "star":
        topo = star_topology(args.k)
    elif args.controllers == "star_via_router":
        topo = star_via_router_topology(args.k)
    else:
        raise CliError(f"unknown controllers kind {args.controllers!r}")
    return topo, device, contiguous_assignment(device.m, args.k)


def _write_or_print(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _layout_doc(mq: LogicalPhysicalMap, cost: int) -> str:
    doc = {
        "schema_version": LAYOUT_SCHEMA_VERSION,
        "n_qubits": mq.n,
        "m_physical": mq.m,
        "cost": cost,
        "layout": list(mq.forward),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _read_layout(path: str, n_qubits: int, m_physical: int) -> LogicalPhysicalMap:
    doc = json.loads(Path(path).read_text())
    fwd = doc["layout"]
    if len(fwd) != n_qubits:
        raise CliError(f"layout covers {len(fwd)} logical qubits, circuit has {n_qubits}")
    mq = LogicalPhysicalMap(n_qubits, m_physical)
    for q, p in enumerate(fwd):
        mq.assign(q, int(p))
    return mq


def cmd_gen(args) -> int:
    if args.family not in GENERATORS:
        raise CliError(f"unknown family {args.family!r} (choose from {sorted(GENERATORS)})")
    circuit = generate(args.family, args.n, n_blocks=args.blocks, seed=args.seed)
    _write_or_print(serialize_circuit(circuit), args.out)
    return 0


def cmd_place(args) -> int:
    circuit = _load_circuit(args.circuit, seed=args.seed)
    topo, device, mc = _load_setup(args)
    ld = extract_cidq_sets(circuit)
    mq = initial_placement(
        mc, ld, topo, device, mode=args.cost_mode, seed=args.seed, sweeps=args.sweeps
    )
    cost = total_cost_L(ld, mq, mc, topo, args.cost_mode)
    _write_or_print(_layout_doc(mq, cost), args.emit_layout)
    return 0


def cmd_route(args) -> int:
    circuit = _load_circuit(args.circuit, seed=args.seed)
    topo, device, mc = _load_setup(args)
    layout = None
    if args.layout != "auto":
        layout = _read_layout(args.layout, circuit.n_qubits, device.m)
    _, report = run_pipeline(
        circuit,
        mc,
        topo,
        device,
        mode=args.mode,
        seed=args.seed,
        cost_mode=args.cost_mode,
        tie_epsilon=Fraction(args.tie_epsilon),
        sweeps=args.sweeps,
        layout=layout,
    )
    _write_or_print(report.to_json(), args.report)
    return 0


def cmd_transpile(args) -> int:
    args.layout = "auto"
    return cmd_route(args)


def cmd_oracle(args) -> int:
    circuit = _load_circuit(args.circuit, seed=args.seed)
    topo, device, mc = _load_setup(args)
    ld = extract_cidq_sets(circuit)
    optimum, mq = brute_force_placement(ld, mc, topo, args.cost_mode, n_qubits=circuit.n_qubits)
    _write_or_print(_layout_doc(mq, optimum), args.out)
    return 0


def _parse_int_list(text: str) -> list[int]:
    """"0,3,7" or "0..9" (inclusive)."""
    m = re.match(r"^(\d+)\.\.(\d+)$", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise CliError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise CliError(f"expected integers or a..b range, got {text!r}") from None


def _sweep_cell(cell: dict) -> dict:
    """One (benchmark, k, seed) cell: paired class and baseline runs."""
    out = dict(cell)
    try:
        circuit = _load_circuit(cell["benchmark"], seed=cell["seed"])
        device = _parse_device(cell["device"])
        if cell["controllers"] == "star":
            topo = star_topology(cell["k"])
        else:
            topo = star_via_router_topology(cell["k"])
        mc = contiguous_assignment(device.m, cell["k"])
        out["n"] = circuit.n_qubits
        for mode in MODES:
            _, report = run_pipeline(
                circuit,
                mc,
                topo,
                device,
                mode=mode,
                seed=cell["seed"],
                cost_mode=cell["cost_mode"],
                sweeps=cell["sweeps"],
            )
            prefix = "class" if mode == "class" else "baseline"
            out[f"{prefix}_iccs"] = report.iccs
            out[f"{prefix}_operations"] = report.operations
            out[f"{prefix}_depth"] = report.depth
            out[f"{prefix}_swaps"] = report.swaps_inserted
            out[f"{prefix}_runtime_ms"] = round(report.runtime_ms, 3)
        b, c = out["baseline_iccs"], out["class_iccs"]
        out["reduction_pct"] = round(100.0 * (b - c) / b, 2) if b else ""
        out["error"] = ""
    except Exception as exc:  # cell isolation: record and keep sweeping
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


_SWEEP_COLUMNS = [
    "benchmark",
    "n",
    "k",
    "seed",
    "cost_mode",
    "class_iccs",
    "baseline_iccs",
    "reduction_pct",
    "class_operations",
    "baseline_operations",
    "class_depth",
    "baseline_depth",
    "class_swaps",
    "baseline_swaps",
    "class_runtime_ms",
    "baseline_runtime_ms",
    "error",
]


def cmd_sweep(args) -> int:
    benchmarks = [b for b in args.benchmarks.split(",") if b]
    ks = _parse_int_list(args.k_values)
    seeds = _parse_int_list(args.seeds)
    cells = [
        {
            "benchmark": bench,
            "k": k,
            "seed": seed,
            "cost_mode": args.cost_mode,
            "device": args.device,
            "controllers": args.controllers,
            "sweeps": args.sweeps,
        }
        for bench in benchmarks
        for k in ks
        for seed in seeds
    ]
    if args.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, cells))
    else:
        results = [_sweep_cell(cell) for cell in cells]

    rows = []
    for res in results:
        rows.append({col: res.get(col, "") for col in _SWEEP_COLUMNS})
    target = args.out
    if target and target != "-":
        with open(target, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=_SWEEP_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=_SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)

    good = [r for r in rows if not r["error"]]
    failed = len(rows) - len(good)
    if good:
        mean_c = sum(r["class_iccs"] for r in good) / len(good)
        mean_b = sum(r["baseline_iccs"] for r in good) / len(good)
        reduction = 100.0 * (mean_b - mean_c) / mean_b if mean_b else 0.0
        print(
            f"sweep: {len(good)} cells ok, {failed} failed; "
            f"mean iccs class={mean_c:.2f} baseline={mean_b:.2f} "
            f"reduction={reduction:.2f}%",
            file=sys.stderr,
        )
    else:
        print(f"sweep: all {len(rows)} cells failed", file=sys.stderr)
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--cost-mode", choices=COST_MODES, default="pair")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers where supported")

    setup = argparse.ArgumentParser(add_help=False)
    setup.add_argument("--topology", help="topology JSON document")
    setup.add_argument("--k", type=int, help="controller count (shortcut for --topology)")
    setup.add_argument("--device", default="heavy_hex_127", help="heavy_hex_127 | line:M | grid:RxC")
    setup.add_argument(
        "--controllers", default="star", choices=("star", "star_via_router"),
        help="controller interconnect used with --k",
    )
    setup.add_argument("--sweeps", type=int, default=1, help="refinement sweeps in placement")

    parser = argparse.ArgumentParser(prog="dynlayout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit a benchmark circuit")
    p.add_argument("family", help="dqft | ipe | pe | cc | random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--blocks", type=int, help="block count for the random family")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("place", parents=[common, setup], help="feedforward-aware placement")
    p.add_argument("--circuit", required=True, help="circuit file or benchmark token")
    p.add_argument("--emit-layout", help="layout JSON output (default stdout)")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("route", parents=[common, setup], help="SWAP-insert onto the device")
    p.add_argument("--circuit", required=True)
    p.add_argument("--layout", default="auto", help="layout JSON or 'auto'")
    p.add_argument("--mode", choices=MODES, default="class")
    p.add_argument("--tie-epsilon", default="0", help="depth-score tolerance for SWAP ties")
    p.add_argument("--report", help="metrics JSON output (default stdout)")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("transpile", parents=[common, setup], help="place then route")
    p.add_argument("--circuit", required=True)
    p.add_argument("--mode", choices=MODES, default="class")
    p.add_argument("--tie-epsilon", default="0")
    p.add_argument("--report", help="metrics JSON output (default stdout)")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("sweep", parents=[common, setup], help="benchmark x k x seed grid")
    p.add_argument("--benchmarks", required=True, help="comma-separated tokens or files")
    p.add_argument("--k-values", required=True, help='"4,6,8" or "4..8"')
    p.add_argument("--seeds", default="0", help='"0,1,2" or "0..9"')
    p.add_argument("--out", help="CSV output (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common, setup], help="exhaustive optimum placement")
    p.add_argument("--circuit", required=True)
    p.add_argument("--out", help="layout JSON output (default stdout)")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ConfigError, CircuitError, ParseError, InstanceTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
