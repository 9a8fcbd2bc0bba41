"""
Feedforward cost on a 4-qubit dynamic QFT
=========================================

Walks the textbook example: extract the measurement-dependency sets, price
three candidate 2+2 partitions by hand, and confirm the brute-force optimum.
"""
import dynlayout as dl

circuit = dl.generate("dqft", 4)
print(dl.serialize_circuit(circuit))

ld = dl.extract_cidq_sets(circuit)
for s in ld:
    print(f"D_{s.id}: measured={sorted(s.measured)} targets={sorted(s.targets)}")

hg = dl.build_hypergraph(ld, 4)
print("degrees:", [hg.degree(q) for q in range(4)])

# two controllers, two slots each, one hop apart
topo = dl.star_topology(2)
mc = dl.contiguous_assignment(4, 2)

candidates = {
    "{q0,q1} | {q2,q3}": [0, 1, 2, 3],
    "{q0,q2} | {q1,q3}": [0, 2, 1, 3],
    "{q0,q3} | {q1,q2}": [0, 2, 3, 1],
}
for label, slots in candidates.items():
    mq = dl.LogicalPhysicalMap(4, 4)
    for q, p in enumerate(slots):
        mq.assign(q, p)
    print(f"{label}: L = {dl.total_cost_L(ld, mq, mc, topo)}")

best, mapping = dl.brute_force_placement(ld, mc, topo)
print("brute-force optimum:", best)

mq = dl.initial_placement(mc, ld, topo, dl.line_device(4))
print("two-stage heuristic:  ", dl.total_cost_L(ld, mq, mc, topo))
