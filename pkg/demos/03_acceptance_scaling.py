"""How acceptance scales with summary dimension and pseudo-sample count.

Every extra summary coordinate adds a constraint, so accepted counts fall
as the sorted-sample dimension d = n grows.  Widening the box with more
pseudo-samples S pulls counts back up, and super-proportionally: the
S-to-2 ratio beats S/2.  Pass --full for the full-size grid (R = 100000),
which takes a couple of minutes.
"""

import sys
from pathlib import Path

from boxcd import run_scaling_study
from boxcd.outputs import write_csv

full = "--full" in sys.argv
r = 100_000 if full else 20_000
report = run_scaling_study([10, 15, 20, 25], [2, 4, 6, 8, 10], r,
                           model="mixture", theta0=0.8, seed=33, workers=2)

print(f"accepted counts out of {r} proposals (rows: n, columns: S)")
header = "  n " + "".join(f"{s:>9}" for s in report.s_values)
print(header)
for n in report.n_values:
    print(f"{n:>4} " + "".join(f"{report.counts[(n, s)]:>9}" for s in report.s_values))

print("\nratio to the S=2 column")
print(header)
for n in report.n_values:
    print(f"{n:>4} " + "".join(f"{report.ratios[(n, s)]:>9.2f}" for s in report.s_values))

out = Path(__file__).parent / "out" / "acceptance_scaling.csv"
write_csv(out, ["n", "s", "accepted", "ratio_vs_s2"], report.rows())
print(f"\ntable written to {out}")
