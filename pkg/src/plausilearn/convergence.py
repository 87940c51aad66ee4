"""Monte Carlo checks that belief settles on the true distribution.

A trial samples a stream from a designated true world, conditions the
plausibility state one observation at a time, and records the first step
after which belief stays inside the epsilon-ball around the truth for the
rest of the horizon.  This finite-horizon settling time is the testable
surrogate for the almost-sure "eventually stays close" guarantee.

A Bayesian learner over the same finite world set (uniform prior, posterior
mass of the ball exceeding 0.95) is available as a paired baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .plausibility import (
    PlausibilityFn,
    TIE_TOLERANCE,
    init_state,
)
from .simplex import (
    MassFunction,
    ObservationEvent,
    Proposition,
    epsilon_ball,
    euclidean_distance,
    sample_stream,
)


class TruthNotInWorldsError(ValueError):
    """The designated true distribution is not one of the worlds."""


class ZeroPlausibilityTruthError(ValueError):
    """The true world has plausibility 0, so it can never be believed."""


@dataclass(frozen=True)
class TrialConfig:
    """One simulated learning run.

    `epsilon=None` selects isolation mode: half the minimum distance from
    the truth to any other world, so settling means believing exactly the
    true world.
    """

    worlds: tuple[MassFunction, ...]
    plausibility: PlausibilityFn
    truth: MassFunction
    horizon: int
    seed: int
    epsilon: float | None = None
    record_trace: bool = False
    check_batch_consistency: bool = False

    def resolved_epsilon(self) -> float:
        if self.epsilon is not None:
            if self.epsilon <= 0:
                raise ValueError("epsilon must be positive")
            return self.epsilon
        others = [
            euclidean_distance(self.truth, w)
            for w in self.worlds
            if w != self.truth
        ]
        if not others:
            return 1.0
        return min(others) / 2


@dataclass
class TrialResult:
    settled: bool
    settle_time: int | None
    final_argmax: frozenset[int]
    belief_trace: list[frozenset[int]] | None = None


@dataclass
class ExperimentSummary:
    trials: int
    settle_fraction: float
    settle_time_median: float | None
    settle_time_p90: float | None
    settle_time_max: int | None
    baseline: "ExperimentSummary | None" = None
    trial_results: list[TrialResult] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        out = {
            "trials": self.trials,
            "settle_fraction": self.settle_fraction,
            "settle_time_median": self.settle_time_median,
            "settle_time_p90": self.settle_time_p90,
            "settle_time_max": self.settle_time_max,
        }
        if self.baseline is not None:
            out["baseline"] = self.baseline.to_dict()
        return out


def _validate(cfg: TrialConfig) -> tuple[int, np.ndarray]:
    try:
        truth_index = cfg.worlds.index(cfg.truth)
    except ValueError:
        raise TruthNotInWorldsError(
            f"truth {cfg.truth} is not a world"
        ) from None
    state = init_state(cfg.worlds, cfg.plausibility)
    if state.base_log[truth_index] == -math.inf:
        raise ZeroPlausibilityTruthError(
            "true world has plausibility 0 under the base plausibility"
        )
    return truth_index, state.base_log


def _argmax_members(values: np.ndarray, tolerance: float) -> frozenset[int]:
    best = values.max()
    if best == -math.inf:
        return frozenset(range(len(values)))
    with np.errstate(invalid="ignore"):
        ok = (values > -math.inf) & (
            np.abs(values - best)
            <= tolerance * np.maximum(1.0, np.maximum(np.abs(values), abs(best)))
        )
    return frozenset(np.flatnonzero(ok).tolist())


def run_trial(cfg: TrialConfig) -> TrialResult:
    """Simulate one stream and report when belief settles in the ball.

    Conditioning is incremental (one outcome per step); because states
    recompute from accumulated counts this is exactly the batch result,
    which `check_batch_consistency` re-asserts at every step.
    """
    truth_index, base_log = _validate(cfg)
    eps = cfg.resolved_epsilon()
    ball = epsilon_ball(cfg.truth, eps, list(cfg.worlds)).members
    if cfg.horizon < 1:
        return TrialResult(False, None, frozenset())

    stream = sample_stream(cfg.truth, cfg.horizon, cfg.seed)
    logw = np.stack([w.log_weights() for w in cfg.worlds])  # worlds x outcomes
    counts = np.zeros(len(cfg.worlds[0].weights), dtype=int)
    trace: list[frozenset[int]] | None = [] if cfg.record_trace else None

    last_failure = 0
    argmax: frozenset[int] = frozenset()
    state = init_state(cfg.worlds, cfg.plausibility) if cfg.check_batch_consistency else None
    alphabet = cfg.worlds[0].alphabet
    for m, outcome in enumerate(stream.outcomes, start=1):
        counts[outcome] += 1
        values = _conditioned(base_log, logw, counts)
        if cfg.check_batch_consistency:
            from .plausibility import condition

            step = ObservationEvent(
                alphabet,
                tuple(int(outcome == i) for i in range(alphabet.size)),
            )
            state = condition(state, step)
            assert np.array_equal(state.log_values, values), (
                "incremental and batch conditioning disagree"
            )
        argmax = _argmax_members(values, TIE_TOLERANCE)
        if trace is not None:
            trace.append(argmax)
        if not argmax <= ball:
            last_failure = m

    settled = last_failure < cfg.horizon
    settle_time = last_failure + 1 if settled else None
    return TrialResult(settled, settle_time, argmax, trace)


def _conditioned(base_log: np.ndarray, logw: np.ndarray, counts: np.ndarray) -> np.ndarray:
    active = counts > 0
    if not active.any():
        return base_log.copy()
    return base_log + (logw[:, active] * counts[active].astype(float)).sum(axis=1)


def bayesian_baseline_trial(cfg: TrialConfig, threshold: float = 0.95) -> TrialResult:
    """Bayesian learner on the same stream: uniform prior over the worlds,
    settled when the posterior mass of the epsilon-ball exceeds `threshold`.

    Unlike `run_trial` this tolerates a truth outside the world set: the
    ball may then be empty and the learner simply never settles."""
    eps = cfg.resolved_epsilon()
    ball = sorted(epsilon_ball(cfg.truth, eps, list(cfg.worlds)).members)
    if cfg.horizon < 1:
        return TrialResult(False, None, frozenset())

    stream = sample_stream(cfg.truth, cfg.horizon, cfg.seed)
    logw = np.stack([w.log_weights() for w in cfg.worlds])
    log_post = np.full(len(cfg.worlds), -math.log(len(cfg.worlds)))
    last_failure = 0
    final_map: frozenset[int] = frozenset()
    for m, outcome in enumerate(stream.outcomes, start=1):
        log_post = log_post + logw[:, outcome]
        norm = logsumexp(log_post)
        if norm == -math.inf:
            ball_mass = 0.0
        else:
            log_post = log_post - norm
            ball_mass = float(np.exp(logsumexp(log_post[ball]))) if ball else 0.0
        if not ball_mass > threshold:
            last_failure = m
    final_map = _argmax_members(log_post, TIE_TOLERANCE)
    settled = last_failure < cfg.horizon
    return TrialResult(settled, last_failure + 1 if settled else None, final_map)


def _summarize(trials: list[TrialResult]) -> ExperimentSummary:
    n = len(trials)
    settled = [t for t in trials if t.settled]
    times = [t.settle_time for t in settled]
    return ExperimentSummary(
        trials=n,
        settle_fraction=len(settled) / n if n else 0.0,
        settle_time_median=float(np.median(times)) if times else None,
        settle_time_p90=float(np.percentile(times, 90)) if times else None,
        settle_time_max=int(max(times)) if times else None,
        trial_results=trials,
    )


def trial_seeds(base_seed: int, trials: int) -> list[int]:
    """Deterministic per-trial stream seeds derived from one base seed."""
    return [int(s) for s in np.random.SeedSequence(base_seed).generate_state(trials)]


def run_experiment(
    cfg: TrialConfig,
    trials: int,
    base_seed: int,
    include_baseline: bool = False,
) -> ExperimentSummary:
    """Run independent seeded trials of `cfg` and aggregate settling stats.

    Each trial draws its own stream seed from `base_seed`; the baseline,
    when requested, reuses the identical streams for a paired comparison.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = trial_seeds(base_seed, trials)
    results = []
    baseline_results = []
    for seed in seeds:
        trial_cfg = TrialConfig(
            worlds=cfg.worlds,
            plausibility=cfg.plausibility,
            truth=cfg.truth,
            horizon=cfg.horizon,
            seed=seed,
            epsilon=cfg.epsilon,
            record_trace=cfg.record_trace,
            check_batch_consistency=cfg.check_batch_consistency,
        )
        results.append(run_trial(trial_cfg))
        if include_baseline:
            baseline_results.append(bayesian_baseline_trial(trial_cfg))
    summary = _summarize(results)
    if include_baseline:
        summary.baseline = _summarize(baseline_results)
    return summary
