"""Feedforward dependency model.

Every mid-circuit measurement whose outcome steers later operations induces a
dependency set: the measured qubit plus all qubits targeted by operations
conditioned on that outcome.  When the measured qubit and a target live under
different controllers, the outcome must be forwarded between controllers, and
the hop distance between them is the number of communication steps paid.
The total over all sets is the quantity the placement stage minimizes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Circuit
from .control import ControllerTopology, LogicalPhysicalMap, QubitControllerMap

COST_MODES = ("pair", "per_target")


@dataclass(frozen=True)
class CidqSet:
    """One measurement event and the qubits its outcome steers.

    measured: qubit(s) whose measurement produces the outcome (one per set
        when extracted from a circuit).
    targets: qubits acted on by operations conditioned on that outcome.
    source_ops / target_ops: op indices of the measure and of the dependent
        conditional operations (extraction bookkeeping; empty for hand-built
        sets).
    """

    id: int
    measured: frozenset[int]
    targets: frozenset[int]
    source_ops: tuple[int, ...] = ()
    target_ops: tuple[int, ...] = ()

    @property
    def qubits(self) -> frozenset[int]:
        return self.measured | self.targets


@dataclass(frozen=True)
class CidqList:
    """Dependency sets of one circuit, ordered by measure position; ids are
    dense list indices."""

    sets: tuple[CidqSet, ...]
    n_qubits: int

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i: int) -> CidqSet:
        return self.sets[i]

    def validate(self) -> None:
        for i, d in enumerate(self.sets):
            if d.id != i:
                raise ValueError(f"set ids must be dense list indices, got {d.id} at {i}")
            if not d.measured:
                raise ValueError(f"set {i} has no measured qubit")
            if not d.targets:
                raise ValueError(f"set {i} has no targets")
            for q in d.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"set {i} mentions qubit {q} outside 0..{self.n_qubits - 1}")


def extract_cidq_sets(circuit: Circuit) -> CidqList:
    """Collect one dependency set per measurement event with dependents.

    A conditional op binds to the most recent earlier measure writing each of
    its condition bits, so re-measuring into the same clbit starts a fresh
    event.  Ops with multi-bit conditions contribute their qubits to every
    involved event.  Measures nobody reads produce no set.
    """
    writer: dict[int, int] = {}  # clbit -> op index of current measure
    measured_qubit: dict[int, int] = {}  # measure op index -> qubit
    targets: dict[int, set[int]] = {}  # measure op index -> target qubits
    target_ops: dict[int, list[int]] = {}
    for i, op in enumerate(circuit.ops):
        if op.condition is not None:
            for bit, _ in op.condition:
                event = writer[bit]
                targets.setdefault(event, set()).update(op.qubits)
                target_ops.setdefault(event, []).append(i)
        if op.is_measure:
            writer[op.clbit] = i
            measured_qubit[i] = op.qubits[0]
    sets = []
    for event in sorted(targets):
        sets.append(
            CidqSet(
                id=len(sets),
                measured=frozenset({measured_qubit[event]}),
                targets=frozenset(targets[event]),
                source_ops=(event,),
                target_ops=tuple(target_ops[event]),
            )
        )
    ld = CidqList(tuple(sets), circuit.n_qubits)
    ld.validate()
    return ld


@dataclass(frozen=True)
class FeedforwardHypergraph:
    """Hypergraph with logical qubits as vertices and one hyperedge per
    dependency set (measured and target qubits together)."""

    n_vertices: int
    hyperedges: tuple[frozenset[int], ...]
    incidence: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def degree(self, q: int) -> int:
        return len(self.incidence[q])

    def neighbors(self, q: int) -> set[int]:
        out: set[int] = set()
        for e in self.incidence[q]:
            out |= self.hyperedges[e]
        out.discard(q)
        return out


def build_hypergraph(ld: CidqList, n_qubits: int) -> FeedforwardHypergraph:
    edges = tuple(d.qubits for d in ld)
    incidence: list[list[int]] = [[] for _ in range(n_qubits)]
    for e, qubits in enumerate(edges):
        for q in qubits:
            incidence[q].append(e)
    return FeedforwardHypergraph(n_qubits, edges, tuple(tuple(x) for x in incidence))


def _check_mode(mode: str) -> None:
    if mode not in COST_MODES:
        raise ValueError(f"cost mode must be one of {COST_MODES}, got {mode!r}")


def cidq_cost_S(
    d: CidqSet,
    mq: LogicalPhysicalMap,
    mc: QubitControllerMap,
    topo: ControllerTopology,
    mode: str = "pair",
) -> int:
    """Communication steps one dependency set costs under a mapping.

    pair mode counts every distinct (source controller, target controller)
    pair once at its hop distance; per_target mode charges each target qubit
    its own delivery, summing hop(source controller, target controller) over
    all (measured, target) qubit combinations.
    """
    _check_mode(mode)
    hop = topo.hop
    src_ctls = [mc.assignment[mq.physical(q)] for q in sorted(d.measured)]
    tgt_ctls = [mc.assignment[mq.physical(q)] for q in sorted(d.targets)]
    if mode == "pair":
        return sum(hop[cs][ct] for cs in set(src_ctls) for ct in set(tgt_ctls) if cs != ct)
    return sum(hop[cs][ct] for cs in src_ctls for ct in tgt_ctls)


def total_cost_L(
    ld: CidqList,
    mq: LogicalPhysicalMap,
    mc: QubitControllerMap,
    topo: ControllerTopology,
    mode: str = "pair",
) -> int:
    """Objective the placement stage minimizes: sum of per-set costs."""
    return sum(cidq_cost_S(d, mq, mc, topo, mode) for d in ld)
