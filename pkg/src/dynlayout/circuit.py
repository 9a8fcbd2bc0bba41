"""Circuit IR for dynamic quantum circuits: gates, mid-circuit measurement,
classically conditioned operations, and the dependency DAG built from them."""
from __future__ import annotations

from dataclasses import dataclass, field

ONE_QUBIT_GATES = frozenset({"h", "x", "z", "u1"})
TWO_QUBIT_GATES = frozenset({"cx", "cz", "swap"})
GATE_PARAM_COUNT = {"h": 0, "x": 0, "z": 0, "u1": 1, "cx": 0, "cz": 0, "swap": 0}


class CircuitError(ValueError):
    """Raised when an operation or circuit violates the IR contract."""


@dataclass(frozen=True)
class Operation:
    """One circuit operation.

    name: gate name, or one of 'measure', 'reset', 'barrier'.
    qubits: operand qubit indices (1 or 2 for gates, 1 for measure/reset,
        >= 1 for barrier).
    params: rotation angles in radians (u1 only).
    clbit: classical bit written by a measure, else None.
    condition: frozenset of (clbit, value) pairs; the op executes only when
        every listed bit holds its value (conjunction). None when unconditioned.
    """

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None
    condition: frozenset[tuple[int, int]] | None = None

    @property
    def is_gate(self) -> bool:
        return self.name in ONE_QUBIT_GATES or self.name in TWO_QUBIT_GATES

    @property
    def is_two_qubit(self) -> bool:
        return self.name in TWO_QUBIT_GATES

    @property
    def is_measure(self) -> bool:
        return self.name == "measure"

    @property
    def is_barrier(self) -> bool:
        return self.name == "barrier"

    def validate(self, n_qubits: int, n_clbits: int) -> None:
        for q in self.qubits:
            if not 0 <= q < n_qubits:
                raise CircuitError(f"qubit index {q} out of range for op {self.name}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate qubit operands in {self.name} {self.qubits}")
        if self.name in ONE_QUBIT_GATES:
            if len(self.qubits) != 1:
                raise CircuitError(f"{self.name} takes 1 qubit, got {self.qubits}")
        elif self.name in TWO_QUBIT_GATES:
            if len(self.qubits) != 2:
                raise CircuitError(f"{self.name} takes 2 qubits, got {self.qubits}")
        elif self.name == "measure":
            if len(self.qubits) != 1 or self.clbit is None:
                raise CircuitError("measure takes 1 qubit and a clbit target")
            if self.condition is not None:
                raise CircuitError("conditioned measure is not supported")
        elif self.name == "reset":
            if len(self.qubits) != 1:
                raise CircuitError("reset takes 1 qubit")
        elif self.name == "barrier":
            if not self.qubits:
                raise CircuitError("barrier needs at least one qubit")
            if self.condition is not None:
                raise CircuitError("conditioned barrier is not supported")
        else:
            raise CircuitError(f"unknown operation {self.name!r}")
        if self.is_gate:
            want = GATE_PARAM_COUNT[self.name]
            if len(self.params) != want:
                raise CircuitError(f"{self.name} takes {want} params, got {len(self.params)}")
            if self.clbit is not None:
                raise CircuitError(f"{self.name} cannot write a clbit")
        if self.clbit is not None and not 0 <= self.clbit < n_clbits:
            raise CircuitError(f"clbit index {self.clbit} out of range")
        if self.condition is not None:
            if not self.condition:
                raise CircuitError("empty condition")
            for bit, val in self.condition:
                if not 0 <= bit < n_clbits:
                    raise CircuitError(f"condition clbit {bit} out of range")
                if val not in (0, 1):
                    raise CircuitError(f"condition value must be 0 or 1, got {val}")


@dataclass(frozen=True)
class Circuit:
    """An ordered operation list over n_qubits qubits and n_clbits classical bits."""

    n_qubits: int
    n_clbits: int
    ops: tuple[Operation, ...]

    def validate(self) -> None:
        """Check per-op well-formedness plus dataflow: every condition bit must
        have been written by an earlier measure."""
        if self.n_qubits <= 0:
            raise CircuitError("circuit needs at least one qubit")
        if self.n_clbits < 0:
            raise CircuitError("negative clbit count")
        written: set[int] = set()
        for i, op in enumerate(self.ops):
            op.validate(self.n_qubits, self.n_clbits)
            if op.condition is not None:
                for bit, _ in op.condition:
                    if bit not in written:
                        raise CircuitError(
                            f"op {i} ({op.name}) conditioned on clbit {bit} "
                            "before any measure writes it"
                        )
            if op.is_measure:
                written.add(op.clbit)

    def count_ops(self) -> int:
        """Number of operations, barriers excluded."""
        return sum(1 for op in self.ops if not op.is_barrier)

    def two_qubit_count(self) -> int:
        return sum(1 for op in self.ops if op.is_two_qubit)

    def is_dynamic(self) -> bool:
        """True when the circuit uses measurement feedforward."""
        return any(op.condition is not None for op in self.ops)


class OpDag:
    """Dependency DAG over circuit op indices.

    Edges order (a) ops sharing a qubit, (b) a measure and every conditional
    op reading the bit it wrote (read-after-write), and (c) clbit anti/output
    dependencies so re-measuring a bit never drifts past earlier readers.
    """

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        n = len(circuit.ops)
        succ: list[set[int]] = [set() for _ in range(n)]
        pred: list[set[int]] = [set() for _ in range(n)]

        def link(a: int, b: int) -> None:
            if a != b and b not in succ[a]:
                succ[a].add(b)
                pred[b].add(a)

        last_on_qubit: dict[int, int] = {}
        writer: dict[int, int] = {}
        readers: dict[int, list[int]] = {}
        for i, op in enumerate(circuit.ops):
            for q in op.qubits:
                if q in last_on_qubit:
                    link(last_on_qubit[q], i)
                last_on_qubit[q] = i
            if op.condition is not None:
                for bit, _ in op.condition:
                    if bit not in writer:
                        raise CircuitError(f"op {i} conditioned on unwritten clbit {bit}")
                    link(writer[bit], i)
                    readers.setdefault(bit, []).append(i)
            if op.is_measure:
                bit = op.clbit
                if bit in writer:
                    link(writer[bit], i)
                for r in readers.get(bit, ()):
                    link(r, i)
                writer[bit] = i
                readers[bit] = []

        self.n_nodes = n
        self.succ: list[tuple[int, ...]] = [tuple(sorted(s)) for s in succ]
        self.pred: list[tuple[int, ...]] = [tuple(sorted(p)) for p in pred]

    def front_layer(self) -> list[int]:
        """Op indices with no predecessors, ascending."""
        return [i for i in range(self.n_nodes) if not self.pred[i]]

    def topological_order(self) -> list[int]:
        indeg = [len(self.pred[i]) for i in range(self.n_nodes)]
        ready = [i for i in range(self.n_nodes) if indeg[i] == 0]
        out: list[int] = []
        while ready:
            i = ready.pop()
            out.append(i)
            for j in self.succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(out) != self.n_nodes:
            raise CircuitError("dependency cycle")  # unreachable for valid circuits
        return out

    def reachable_from(self, node: int) -> set[int]:
        seen: set[int] = set()
        stack = [node]
        while stack:
            x = stack.pop()
            for y in self.succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen


def build_dag(circuit: Circuit) -> OpDag:
    return OpDag(circuit)


def depth(circuit: Circuit) -> int:
    """Longest dependency-path length; barriers order ops but add no depth."""
    dag = build_dag(circuit)
    best = 0
    d = [0] * dag.n_nodes
    for i in dag.topological_order():
        w = 0 if circuit.ops[i].is_barrier else 1
        d[i] = w + max((d[p] for p in dag.pred[i]), default=0)
        best = max(best, d[i])
    return best


def count_ops(circuit: Circuit) -> int:
    return circuit.count_ops()
