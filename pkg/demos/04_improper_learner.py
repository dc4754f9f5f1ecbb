"""Run the improper private learner end to end and inspect its trace.

The pipeline: represent the class against a member concept, split the
sample, summarize each subset by the deepest point its examples force,
take a private median of those depths, then privately select among the
points at that depth. The selected point's root path is the hypothesis.
"""

import numpy as np

import vc1learn as v

cls = v.thresholds_class(256)
ctx = v.prepare_context(cls)
params = v.LearnParams(alpha=0.2, beta=0.2, privacy=v.PrivacyParams(1.0, 1e-5))
budget = v.sample_budget(params, ctx.tree.height)
print(f"class: {cls.name}, tree height {ctx.tree.height}")
print(f"budget: t={budget.t} subsets of {budget.per_subset} -> N1={budget.N1}")

rng = v.make_rng(1)
dist = v.Distribution.uniform(cls.domain_size)
c_star = cls.concepts[100]
print(f"target concept: {c_star.id}")

# A deliberately under-budget run is still private, just not guaranteed
# accurate; at this domain size it is nonetheless reliably good.
data = v.sample_dataset(cls, c_star, dist, 50_000, rng)
trace = v.improper_learn(cls, data, params, rng, context=ctx)

depths = np.array(trace.subset_depths)
print(f"\nsubset depth summary: min={depths.min()} median={np.median(depths):.0f} max={depths.max()}")
print(f"private median depth: {trace.median_depth}")
print(f"candidates at that depth: {len(trace.candidates)}, scores>0: {sum(s > 0 for s in trace.scores)}")
print(f"selected point: {trace.chosen_point}")
err = v.error_on_distribution(trace.hypothesis, c_star, dist)
print(f"exact error of the output hypothesis: {err:.4f} (target alpha {params.alpha})")
print(f"output is a class member: {trace.hypothesis.proper_index is not None}")

print("\nworst-case privacy of one run: (2 eps, 2 delta) =",
      f"({2 * params.privacy.epsilon}, {2 * params.privacy.delta})")
