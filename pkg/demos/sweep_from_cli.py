# The same experiment grid you would run from the shell, driven through the
# CLI entry point. Produces a flat CSV that any plotting tool can consume.
import csv
import tempfile
from pathlib import Path

from dynlayout.cli import main

workdir = Path(tempfile.mkdtemp(prefix="dynlayout-sweep-"))
out = workdir / "sweep.csv"

# equivalent shell command:
#   dynlayout sweep --benchmarks dqft20,cc12,random20 --k-values 2,4 \
#       --seeds 0..2 --device heavy_hex_127 --out sweep.csv
rc = main([
    "sweep",
    "--benchmarks", "dqft20,cc12,random20",
    "--k-values", "2,4",
    "--seeds", "0..2",
    "--device", "heavy_hex_127",
    "--out", str(out),
])
print("exit code:", rc)

rows = list(csv.DictReader(out.open()))
print(f"{len(rows)} cells -> {out}")
print(f"{'benchmark':<10} {'k':>2} {'seed':>4} {'class':>6} {'base':>6} {'reduction%':>10}")
for row in rows:
    print(f"{row['benchmark']:<10} {row['k']:>2} {row['seed']:>4} "
          f"{row['class_iccs']:>6} {row['baseline_iccs']:>6} {row['reduction_pct']:>10}")
