"""Plausibility maps over candidate distributions and likelihood conditioning.

A plausibility state assigns each world a non-negative plausibility, stored
as a natural log (with -inf for plausibility 0).  Conditioning on sampling
evidence multiplies each world's plausibility by the likelihood it assigns
the evidence; in the log domain this is addition, so repeated conditioning
cannot underflow.

To make conditioning order-independent bit-for-bit, a state keeps its base
log-plausibilities together with the accumulated evidence counts and
recomputes the current values from those; integer count addition is exactly
commutative, so any conditioning order yields identical floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .simplex import (
    AlphabetMismatchError,
    MassFunction,
    ObservationEvent,
    Proposition,
    empty_event,
    event_concat,
)

#: Relative tie tolerance for argmax extraction.  Grid symmetry produces
#: exact mathematical ties that floating point perturbs slightly.
TIE_TOLERANCE = 1e-9


class EmptyWorldSetError(ValueError):
    """A plausibility state needs at least one world."""


class IncompleteTableError(ValueError):
    """A tabulated plausibility does not cover every world."""


def entropy_plausibility(mu: MassFunction) -> float:
    """Shannon entropy of `mu` (natural log, 0*log 0 := 0).

    Uniquely maximised by the uniform distribution, so an agent with this
    plausibility starts out believing the least informative world.
    """
    total = 0.0
    for w in mu.weights:
        if w > 0:
            total -= float(w) * math.log(w)
    return total


def centre_of_mass_plausibility(mu: MassFunction) -> float:
    """Product of the weights of `mu`.

    The order-equivalent exponential of the sum-of-logs "centre of mass"
    score; 0 on the simplex boundary, maximal at the uniform distribution.
    """
    total = 1.0
    for w in mu.weights:
        total *= float(w)
    return total


@dataclass(frozen=True)
class PlausibilityFn:
    """A named plausibility map, or an explicit per-world table."""

    kind: str  # "entropy" | "centre_of_mass" | "tabulated"
    table: Mapping[int, float] | None = None

    def values_for(self, worlds: tuple[MassFunction, ...]) -> list[float]:
        if self.kind == "entropy":
            return [entropy_plausibility(w) for w in worlds]
        if self.kind == "centre_of_mass":
            return [centre_of_mass_plausibility(w) for w in worlds]
        if self.kind == "tabulated":
            assert self.table is not None
            missing = [i for i in range(len(worlds)) if i not in self.table]
            if missing:
                raise IncompleteTableError(
                    f"table missing worlds {missing[:5]}"
                )
            vals = [float(self.table[i]) for i in range(len(worlds))]
            if any(v < 0 for v in vals):
                raise ValueError("plausibility values must be non-negative")
            return vals
        raise ValueError(f"unknown plausibility kind {self.kind!r}")


ENTROPY = PlausibilityFn("entropy")
CENTRE_OF_MASS = PlausibilityFn("centre_of_mass")


def tabulated(values) -> PlausibilityFn:
    """Tabulated plausibility from a world-index -> value mapping or list."""
    if not isinstance(values, Mapping):
        values = {i: v for i, v in enumerate(values)}
    return PlausibilityFn("tabulated", {int(k): float(v) for k, v in values.items()})


@dataclass(frozen=True)
class PlausibilityState:
    """Log-domain plausibilities for the worlds of a frame.

    `base_log` holds ln(pla(world)) for the initial plausibility function;
    `event` is the accumulated sampling evidence.  `log_values` is always
    base_log + log-likelihood(world, event), recomputed on conditioning.
    """

    worlds: tuple[MassFunction, ...]
    base_log: np.ndarray
    event: ObservationEvent
    log_values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.worlds)

    def plausibility(self, index: int) -> float:
        return math.exp(self.log_values[index])


def _log_weight_matrix(worlds: tuple[MassFunction, ...]) -> np.ndarray:
    return np.stack([w.log_weights() for w in worlds])


def _conditioned_values(
    worlds: tuple[MassFunction, ...],
    base_log: np.ndarray,
    event: ObservationEvent,
) -> np.ndarray:
    """base_log plus per-world log-likelihood of `event`, -inf safe."""
    counts = np.array(event.counts, dtype=float)
    active = counts > 0
    if not active.any():
        return base_log.copy()
    logw = _log_weight_matrix(worlds)[:, active]
    # -inf * positive count stays -inf; zero counts are excluded so no NaN.
    loglik = (logw * counts[active]).sum(axis=1)
    return base_log + loglik


def init_state(worlds, fn: PlausibilityFn) -> PlausibilityState:
    """Initial plausibility state for a world set under `fn`."""
    worlds = tuple(worlds)
    if not worlds:
        raise EmptyWorldSetError("world set must be non-empty")
    alphabet = worlds[0].alphabet
    for w in worlds:
        if w.alphabet != alphabet:
            raise AlphabetMismatchError("worlds over different alphabets")
    base = np.array(
        [math.log(v) if v > 0 else -math.inf for v in fn.values_for(worlds)]
    )
    return PlausibilityState(worlds, base, empty_event(alphabet), base.copy())


def condition(state: PlausibilityState, e: ObservationEvent) -> PlausibilityState:
    """Reweight every world by the likelihood it assigns the evidence `e`.

    Returns a fresh state; the input is unchanged.  Conditioning on e then
    e' equals conditioning on their combined counts, bit-for-bit.
    """
    if e.alphabet != state.event.alphabet:
        raise AlphabetMismatchError("event alphabet differs from state")
    combined = event_concat(state.event, e)
    values = _conditioned_values(state.worlds, state.base_log, combined)
    return PlausibilityState(state.worlds, state.base_log, combined, values)


def argmax_worlds(
    state: PlausibilityState, tolerance: float = TIE_TOLERANCE
) -> Proposition:
    """All worlds whose plausibility ties the maximum.

    When every world has plausibility 0, all worlds are returned: the
    belief quantifier then ranges over the whole frame.
    """
    values = state.log_values
    best = values.max()
    if best == -math.inf:
        return Proposition.of(range(len(values)))
    members = [
        i
        for i, v in enumerate(values)
        if v > -math.inf
        and abs(v - best) <= tolerance * max(1.0, abs(v), abs(best))
    ]
    return Proposition.of(members)


def argmax_restricted(
    state: PlausibilityState,
    restriction: Proposition,
    tolerance: float = TIE_TOLERANCE,
) -> Proposition:
    """Argmax of the state among the worlds in `restriction` only."""
    members = sorted(restriction.members)
    if not members:
        return Proposition.of(())
    values = state.log_values[members]
    best = values.max()
    if best == -math.inf:
        return Proposition.of(members)
    chosen = [
        m
        for m, v in zip(members, values)
        if v > -math.inf
        and abs(v - best) <= tolerance * max(1.0, abs(v), abs(best))
    ]
    return Proposition.of(chosen)


def restrict_state(state: PlausibilityState, keep: Proposition) -> PlausibilityState:
    """State over the sub-world-set `keep`, values carried over unchanged."""
    members = sorted(keep.members)
    if not members:
        raise EmptyWorldSetError("cannot restrict to an empty world set")
    worlds = tuple(state.worlds[i] for i in members)
    base = state.base_log[members].copy()
    values = state.log_values[members].copy()
    return PlausibilityState(worlds, base, state.event, values)
