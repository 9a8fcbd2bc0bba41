"""SWAP scheduling that knows about measurement feedforward.

The routing loop is look-ahead distance-minimizing in the usual style: run
every front-layer op whose operands allow it, and when only non-adjacent
two-qubit gates remain, insert the SWAP that minimizes a depth cost over the
front layer plus a bounded window of upcoming two-qubit gates.  Depth scores
are exact rationals, so "equally good" SWAPs tie exactly; the tie is then
broken by the communication cost of the dependency sets active near the
front, evaluated under each tied SWAP, with a seeded-random pick among the
remaining best.  A baseline variant replaces that tie-break with the seeded
pick alone, leaving every other decision identical.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .circuit import Circuit, OpDag, Operation
from .cidq import CidqList, CidqSet, cidq_cost_S, extract_cidq_sets
from .control import (
    ConfigError,
    ControllerTopology,
    DeviceGraph,
    LogicalPhysicalMap,
    QubitControllerMap,
)

EXTENDED_SET_SIZE = 20
EXTENDED_SET_WEIGHT = Fraction(1, 2)


@dataclass(frozen=True)
class SwapDecision:
    """One SWAP choice: the candidates tied on depth cost, the pick, and
    whether the livelock escape forced it."""

    chosen: tuple[int, int]
    depth_argmin: tuple[tuple[int, int], ...]
    forced: bool = False


@dataclass
class RoutedCircuit:
    """Routing result.

    circuit: the executed op sequence over physical qubit indices, inserted
        swap gates included.
    log: execution-order entries, ("op", input op index) or ("swap", pa, pb);
        replaying it from initial_mapping tracks the mapping at any point.
    """

    circuit: Circuit
    source: Circuit
    initial_mapping: LogicalPhysicalMap
    final_mapping: LogicalPhysicalMap
    log: tuple[tuple, ...]
    swaps_inserted: int
    decisions: tuple[SwapDecision, ...]


def obtain_swaps(
    front_ops: list[Operation], mq: LogicalPhysicalMap, device: DeviceGraph
) -> list[tuple[int, int]]:
    """Candidate SWAPs: every device edge touching the physical image of any
    qubit in the front layer's two-qubit gates, deduplicated and sorted."""
    phys = set()
    for op in front_ops:
        if op.is_two_qubit:
            for q in op.qubits:
                phys.add(mq.physical(q))
    candidates = set()
    for p in phys:
        for nb in device.neighbors(p):
            candidates.add((min(p, nb), max(p, nb)))
    return sorted(candidates)


def extended_set(front: list[int], dag: OpDag) -> list[int]:
    """Up to EXTENDED_SET_SIZE upcoming two-qubit ops, breadth-first over DAG
    successors of the front layer."""
    out: list[int] = []
    seen = set(front)
    frontier = sorted(front)
    while frontier and len(out) < EXTENDED_SET_SIZE:
        nxt = []
        for node in frontier:
            for succ in dag.succ[node]:
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        nxt.sort()
        for node in nxt:
            if dag.circuit.ops[node].is_two_qubit and len(out) < EXTENDED_SET_SIZE:
                out.append(node)
        frontier = nxt
    return out


def _distance_sum(nodes, ops, mq: LogicalPhysicalMap, device: DeviceGraph) -> int:
    total = 0
    for node in nodes:
        a, b = ops[node].qubits
        total += device.dist[mq.physical(a)][mq.physical(b)]
    return total


def depth_cost(
    front: list[int], dag: OpDag, device: DeviceGraph, mq: LogicalPhysicalMap
) -> Fraction:
    """Average front-layer distance plus half the average look-ahead distance,
    as an exact rational (the look-ahead term drops out when no two-qubit op
    is upcoming)."""
    ops = dag.circuit.ops
    f2 = [node for node in front if ops[node].is_two_qubit]
    if not f2:
        return Fraction(0)
    ext = extended_set(front, dag)
    score = Fraction(_distance_sum(f2, ops, mq, device), len(f2))
    if ext:
        score += EXTENDED_SET_WEIGHT * Fraction(_distance_sum(ext, ops, mq, device), len(ext))
    return score


def active_cidq_sets(
    front: list[int], dag: OpDag, mq_temp: LogicalPhysicalMap, ld: CidqList
) -> list[CidqSet]:
    """Sets owning a conditional op inside the two-layer window made of the
    front layer and its direct DAG successors.  The window is structural, so
    the hypothetical mapping does not change which sets are active."""
    del mq_temp
    owner: dict[int, list[int]] = {}
    for d in ld:
        for op_idx in d.target_ops:
            owner.setdefault(op_idx, []).append(d.id)
    window = set(front)
    for node in front:
        window.update(dag.succ[node])
    ids = sorted({sid for node in window for sid in owner.get(node, ())})
    return [ld[sid] for sid in ids]


def iccs_score(
    swap: tuple[int, int],
    mq: LogicalPhysicalMap,
    active: list[CidqSet],
    mc: QubitControllerMap,
    topo: ControllerTopology,
    mode: str = "pair",
) -> int:
    """Total communication cost of the active sets with the SWAP applied."""
    trial = mq.copy()
    trial.swap_physical(*swap)
    return sum(cidq_cost_S(d, trial, mc, topo, mode) for d in active)


def _executable(op: Operation, mq: LogicalPhysicalMap, device: DeviceGraph) -> bool:
    if op.is_two_qubit:
        return device.dist[mq.physical(op.qubits[0])][mq.physical(op.qubits[1])] == 1
    return True


def schedule(
    circuit: Circuit,
    dag: OpDag,
    mq0: LogicalPhysicalMap,
    mc: QubitControllerMap,
    topo: ControllerTopology,
    device: DeviceGraph,
    ld: CidqList | None = None,
    cost_mode: str = "pair",
    seed: int = 0,
    tie_break: str = "iccs",
    tie_epsilon: Fraction = Fraction(0),
) -> RoutedCircuit:
    """Route a circuit onto the device starting from a complete layout.

    tie_break "iccs" scores depth-tied SWAPs by the communication cost of the
    active dependency sets; "random" (the baseline ablation) picks among the
    depth-tied SWAPs directly.  Both use the seeded generator, so a fixed
    (circuit, layout, seed, config) tuple reproduces the output exactly.
    """
    if tie_break not in ("iccs", "random"):
        raise ValueError(f"tie_break must be 'iccs' or 'random', got {tie_break!r}")
    if not mq0.is_complete():
        raise ConfigError("routing needs a complete initial layout")
    if ld is None:
        ld = extract_cidq_sets(circuit)
    rng = random.Random(seed)
    mq = mq0.copy()
    ops = circuit.ops
    indeg = [len(dag.pred[i]) for i in range(dag.n_nodes)]
    front = set(dag.front_layer())
    out_ops: list[Operation] = []
    log: list[tuple] = []
    decisions: list[SwapDecision] = []
    swaps_inserted = 0
    stagnant_swaps = 0
    livelock_limit = 3 * device.m

    def emit_swap(pa: int, pb: int) -> None:
        nonlocal swaps_inserted, stagnant_swaps
        out_ops.append(Operation("swap", (pa, pb)))
        log.append(("swap", pa, pb))
        mq.swap_physical(pa, pb)
        swaps_inserted += 1
        stagnant_swaps += 1

    def execute(node: int) -> None:
        nonlocal stagnant_swaps
        op = ops[node]
        out_ops.append(
            Operation(
                op.name,
                tuple(mq.physical(q) for q in op.qubits),
                op.params,
                op.clbit,
                op.condition,
            )
        )
        log.append(("op", node))
        front.discard(node)
        for succ in dag.succ[node]:
            indeg[succ] -= 1
            if indeg[succ] == 0:
                front.add(succ)
        stagnant_swaps = 0

    while front:
        ready = [node for node in sorted(front) if _executable(ops[node], mq, device)]
        if ready:
            for node in ready:
                execute(node)
            continue

        front_nodes = sorted(front)
        if stagnant_swaps >= livelock_limit:
            # force-route the oldest blocked gate along a shortest path
            node = front_nodes[0]
            a, b = ops[node].qubits
            path = device.shortest_path(mq.physical(a), mq.physical(b))
            for i in range(len(path) - 2):
                decisions.append(
                    SwapDecision((min(path[i], path[i + 1]), max(path[i], path[i + 1])), (), True)
                )
                emit_swap(path[i], path[i + 1])
            stagnant_swaps = 0
            continue

        front_ops = [ops[node] for node in front_nodes]
        candidates = obtain_swaps(front_ops, mq, device)
        scores: list[Fraction] = []
        for pa, pb in candidates:
            mq.swap_physical(pa, pb)
            scores.append(depth_cost(front_nodes, dag, device, mq))
            mq.swap_physical(pa, pb)
        best = min(scores)
        similar = [c for c, s in zip(candidates, scores) if s - best <= tie_epsilon]
        if len(similar) == 1:
            chosen = similar[0]
        elif tie_break == "iccs":
            active = active_cidq_sets(front_nodes, dag, mq, ld)
            comm = [iccs_score(c, mq, active, mc, topo, cost_mode) for c in similar]
            low = min(comm)
            chosen = rng.choice([c for c, s in zip(similar, comm) if s == low])
        else:
            chosen = rng.choice(similar)
        decisions.append(SwapDecision(chosen, tuple(similar)))
        emit_swap(*chosen)

    routed = Circuit(device.m, circuit.n_clbits, tuple(out_ops))
    routed.validate()
    return RoutedCircuit(
        circuit=routed,
        source=circuit,
        initial_mapping=mq0.copy(),
        final_mapping=mq,
        log=tuple(log),
        swaps_inserted=swaps_inserted,
        decisions=tuple(decisions),
    )


def accumulate_iccs(
    routed: RoutedCircuit,
    ld: CidqList,
    mc: QubitControllerMap,
    topo: ControllerTopology,
    mode: str = "pair",
) -> int:
    """Communication steps actually incurred by a routed circuit.

    Replays the execution log: a set's source controller is wherever the
    measured qubit sat when its measure executed; each conditioned op charges
    delivery to wherever its qubits sat when it executed.  A target qubit
    counts once per distinct controller it was observed in (SWAPs between two
    reads of the same outcome add a delivery).  Without SWAPs this equals the
    static objective under the initial mapping.
    """
    src_of_op: dict[int, list[int]] = {}
    tgt_of_op: dict[int, list[int]] = {}
    for d in ld:
        for idx in d.source_ops:
            src_of_op.setdefault(idx, []).append(d.id)
        for idx in d.target_ops:
            tgt_of_op.setdefault(idx, []).append(d.id)

    mq = routed.initial_mapping.copy()
    sources: dict[int, set[tuple[int, int]]] = {d.id: set() for d in ld}
    deliveries: dict[int, set[tuple[int, int]]] = {d.id: set() for d in ld}
    for entry in routed.log:
        if entry[0] == "swap":
            mq.swap_physical(entry[1], entry[2])
            continue
        idx = entry[1]
        for sid in src_of_op.get(idx, ()):
            for q in ld[sid].measured:
                sources[sid].add((q, mc.assignment[mq.physical(q)]))
        for sid in tgt_of_op.get(idx, ()):
            for q in routed.source.ops[idx].qubits:
                if q in ld[sid].targets:
                    deliveries[sid].add((q, mc.assignment[mq.physical(q)]))

    hop = topo.hop
    total = 0
    for d in ld:
        if mode == "pair":
            src_ctls = {c for _, c in sources[d.id]}
            tgt_ctls = {c for _, c in deliveries[d.id]}
            total += sum(hop[cs][ct] for cs in src_ctls for ct in tgt_ctls if cs != ct)
        else:
            total += sum(
                hop[cs][ct] for _, cs in sources[d.id] for _, ct in deliveries[d.id]
            )
    return total
