"""Shared instance builders for the test suite."""
from __future__ import annotations

import random

from dynlayout import (
    CidqList,
    CidqSet,
    LogicalPhysicalMap,
    QubitControllerMap,
    contiguous_assignment,
    star_topology,
)


def random_cidq_list(rng: random.Random, n_qubits: int, n_sets: int) -> CidqList:
    """Synthetic dependency sets over n_qubits, each one measured qubit plus a
    nonempty target group (no backing circuit needed for placement tests)."""
    sets = []
    for i in range(n_sets):
        src = rng.randrange(n_qubits)
        pool = [q for q in range(n_qubits) if q != src]
        n_tgt = rng.randint(1, max(1, min(len(pool), n_qubits // 2)))
        targets = frozenset(rng.sample(pool, n_tgt))
        sets.append(CidqSet(i, frozenset({src}), targets))
    ld = CidqList(tuple(sets), n_qubits)
    ld.validate()
    return ld


def uniform_setup(n_qubits: int, k: int, capacity: int):
    """Star topology plus a contiguous controller split of k*capacity slots."""
    topo = star_topology(k)
    mc = contiguous_assignment(k * capacity, k)
    return topo, mc


def explicit_mapping(slots: list[int], m: int) -> LogicalPhysicalMap:
    mq = LogicalPhysicalMap(len(slots), m)
    for q, p in enumerate(slots):
        mq.assign(q, p)
    return mq


def complete_random_mapping(
    rng: random.Random, n_qubits: int, mc: QubitControllerMap
) -> LogicalPhysicalMap:
    mq = LogicalPhysicalMap(n_qubits, mc.m)
    for q, p in enumerate(rng.sample(range(mc.m), n_qubits)):
        mq.assign(q, p)
    return mq
