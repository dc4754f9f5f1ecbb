"""Seeded experiment sweeps producing CSV evidence.

A sweep fixes a generated class, draws fresh data per trial, runs a
learner, and scores the output hypothesis exactly against the sampling
distribution. Identical config and seed give identical rows; trials use
split random streams keyed by index, so results do not depend on
execution order.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .concepts import ConceptClass, Dataset
from .generators import GeneratorSpec, generate_class, sample_dataset
from .learners import (
    LearnParams,
    LearnerContext,
    improper_learn,
    prepare_context,
    proper_learn,
    sample_budget,
)
from .mechanisms import PrivacyParams
from .oracles import Distribution, error_on_distribution
from .rng import make_rng

REPORT_COLUMNS = (
    "trial",
    "mode",
    "n",
    "epsilon",
    "delta",
    "alpha",
    "beta",
    "error_d",
    "proper_flag",
    "chosen_point",
    "seed",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a class, a labeling policy, learner knobs, and trial count."""

    generator: GeneratorSpec
    params: LearnParams
    mode: str = "improper"  # improper | proper
    trials: int = 1
    seed: int = 0
    concept_index: int | None = None  # None: a fresh random concept per trial
    weights: tuple[float, ...] | None = None  # None: uniform
    n_override: int | None = None  # None: the derived budget

    def __post_init__(self) -> None:
        if self.mode not in ("improper", "proper"):
            raise ValueError("mode must be 'improper' or 'proper'")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass(frozen=True)
class ReportRow:
    trial: int
    mode: str
    n: int
    epsilon: float
    delta: float
    alpha: float
    beta: float
    error_d: float
    proper_flag: bool
    chosen_point: int | None
    runtime_ms: float
    seed: int


def _sample_subsets(
    cls: ConceptClass,
    concept_row: np.ndarray,
    dist: Distribution,
    t: int,
    per_subset: int,
    rng: np.random.Generator,
) -> list[Dataset]:
    """Draw t i.i.d. subsets of fixed size directly.

    Equal in distribution to drawing t * per_subset examples and randomly
    partitioning them round-robin, but avoids materializing and shuffling
    the combined sample.
    """
    counts = rng.multinomial(per_subset, dist.weights, size=t)
    out = []
    base = np.arange(cls.domain_size, dtype=np.int64)
    for i in range(t):
        pts = np.repeat(base, counts[i])
        out.append(Dataset(pts, concept_row[pts]))
    return out


def run_experiment(
    config: ExperimentConfig, *, context: LearnerContext | None = None
) -> list[ReportRow]:
    """Run all trials of a sweep and return one row per trial."""
    cls = generate_class(config.generator)
    ctx = context if context is not None else prepare_context(cls)
    params = config.params
    budget = sample_budget(params, ctx.tree.height)
    if config.weights is None:
        dist = Distribution.uniform(cls.domain_size)
    else:
        dist = Distribution(np.array(config.weights))

    rows: list[ReportRow] = []
    streams = make_rng(config.seed).spawn(config.trials)
    for trial, trng in enumerate(streams):
        if config.concept_index is None:
            c_idx = int(trng.integers(len(cls.concepts)))
        else:
            c_idx = config.concept_index
        c_star = cls.concepts[c_idx]
        row_vals = np.zeros(cls.domain_size, dtype=np.uint8)
        if c_star.ones:
            row_vals[list(c_star.ones)] = 1

        start = time.perf_counter()
        if config.n_override is None:
            subsets = _sample_subsets(
                cls, row_vals, dist, budget.t, budget.per_subset, trng
            )
            if config.mode == "improper":
                n_used = budget.N1
                trace = improper_learn(
                    cls, None, params, trng, context=ctx, subsets=subsets
                )
                hypothesis = trace.hypothesis
                chosen = trace.chosen_point
            else:
                n_used = budget.N1 + budget.N2
                stage2 = sample_dataset(cls, c_star, dist, budget.N2, trng)
                trace_p = proper_learn(
                    cls,
                    None,
                    params,
                    trng,
                    context=ctx,
                    stage1_subsets=subsets,
                    stage2=stage2,
                )
                hypothesis = trace_p.hypothesis
                chosen = trace_p.chosen_point
        else:
            n_used = config.n_override
            data = sample_dataset(cls, c_star, dist, n_used, trng)
            if config.mode == "improper":
                trace = improper_learn(cls, data, params, trng, context=ctx)
                hypothesis = trace.hypothesis
                chosen = trace.chosen_point
            else:
                trace_p = proper_learn(cls, data, params, trng, context=ctx)
                hypothesis = trace_p.hypothesis
                chosen = trace_p.chosen_point
        elapsed_ms = (time.perf_counter() - start) * 1e3

        rows.append(
            ReportRow(
                trial=trial,
                mode=config.mode,
                n=n_used,
                epsilon=params.privacy.epsilon,
                delta=params.privacy.delta,
                alpha=params.alpha,
                beta=params.beta,
                error_d=error_on_distribution(hypothesis, c_star, dist),
                proper_flag=hypothesis.proper_index is not None,
                chosen_point=chosen,
                runtime_ms=elapsed_ms,
                seed=config.seed,
            )
        )
    return rows


def config_to_json(config: ExperimentConfig) -> dict:
    return asdict(config)


def config_from_json(data: dict) -> ExperimentConfig:
    gen = GeneratorSpec(**data["generator"])
    pdata = dict(data["params"])
    privacy = PrivacyParams(**pdata.pop("privacy"))
    constants = pdata.pop("constants", None)
    from .learners import BudgetConstants

    params = LearnParams(
        privacy=privacy,
        constants=BudgetConstants(**constants) if constants else BudgetConstants(),
        **pdata,
    )
    weights = data.get("weights")
    return ExperimentConfig(
        generator=gen,
        params=params,
        mode=data.get("mode", "improper"),
        trials=data.get("trials", 1),
        seed=data.get("seed", 0),
        concept_index=data.get("concept_index"),
        weights=tuple(weights) if weights else None,
        n_override=data.get("n_override"),
    )


def write_report_csv(
    rows: list[ReportRow],
    config: ExperimentConfig,
    path: str | Path,
    *,
    include_runtime: bool = False,
) -> None:
    """Write rows with a '#'-prefixed config echo.

    Runtime is excluded by default so identical config and seed produce
    byte-identical files; pass ``include_runtime=True`` for profiling runs.
    """
    columns = REPORT_COLUMNS + (("runtime_ms",) if include_runtime else ())
    lines = [
        "# vc1learn experiment report",
        "# config: " + json.dumps(config_to_json(config), sort_keys=True),
        ",".join(columns),
    ]
    for r in rows:
        vals = [
            str(r.trial),
            r.mode,
            str(r.n),
            repr(r.epsilon),
            repr(r.delta),
            repr(r.alpha),
            repr(r.beta),
            repr(r.error_d),
            str(int(r.proper_flag)),
            "" if r.chosen_point is None else str(r.chosen_point),
            str(r.seed),
        ]
        if include_runtime:
            vals.append(f"{r.runtime_ms:.3f}")
        lines.append(",".join(vals))
    Path(path).write_text("\n".join(lines) + "\n")
