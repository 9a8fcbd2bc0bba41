# Route the Type-II benchmarks twice: dependency-aware placement with the
# communication tie-break ("class") versus a seeded random layout with random
# tie-breaks ("baseline"). Same circuit, same device, paired seeds.
import statistics

import dynlayout as dl

device = dl.heavy_hex_127_device()
topo = dl.star_topology(4)
mc = dl.contiguous_assignment(127, 4)

print(f"{'benchmark':<12} {'seed':>4} {'mode':<9} {'ops':>5} {'depth':>5} {'swaps':>5} {'iccs':>5}")
totals = {"class": [], "baseline": []}
for fam, n in (("cc", 12), ("pe", 20)):
    circuit = dl.generate(fam, n)
    for seed in range(3):
        for mode in ("class", "baseline"):
            routed, report = dl.run_pipeline(circuit, mc, topo, device, mode=mode, seed=seed)
            totals[mode].append(report.iccs)
            print(f"{fam}-{n:<9} {seed:>4} {mode:<9} {report.operations:>5} "
                  f"{report.depth:>5} {report.swaps_inserted:>5} {report.iccs:>5}")

mean_class = statistics.mean(totals["class"])
mean_base = statistics.mean(totals["baseline"])
print(f"\nmean iccs: class={mean_class:.2f} baseline={mean_base:.2f}")
if mean_base:
    print(f"reduction: {100 * (mean_base - mean_class) / mean_base:.1f}%")
