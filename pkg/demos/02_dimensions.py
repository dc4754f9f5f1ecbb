"""Exact combinatorial dimensions of small classes, brute force.

The headline relationship: tree depth is at most the thresholds
dimension, which nests between log and exp of the mistake-bound
dimension. Everything below is computed by exhaustive oracles.
"""

import vc1learn as v

rows = [
    ("thresholds(8)", v.thresholds_class(8)),
    ("thresholds(16)", v.thresholds_class(16)),
    ("points(8)", v.point_functions_class(8)),
    ("example", v.example_class()),
    ("random_tree(12)", v.random_tree_class(12, max_children=3, concept_rate=0.6, seed=1)),
]

print(f"{'class':18} {'vc':>3} {'ldim':>5} {'tdim':>5} {'tree height':>12}")
for name, cls in rows:
    base, _ = v.canonicalize(cls)
    report = v.dimension_report(base)
    height = v.prepare_context(base).tree.height
    print(f"{name:18} {report.vc:>3} {report.littlestone:>5} {report.thresholds:>5} {height:>12}")
    assert v.floor_log2(report.littlestone) <= report.thresholds <= 2 ** (report.littlestone + 1)

print("\nthresholds(n) shows the gap ldim ~ log(n) vs tdim = n:")
for n in (2, 4, 8, 16):
    cls = v.thresholds_class(n)
    print(f"  n={n:>2}: ldim={v.littlestone_dimension(cls)}  tdim={v.thresholds_dimension(cls)}")
