"""Finite outcome alphabets, probability mass functions and observation events.

Worlds are points on the probability simplex with exact rational coordinates,
so that linear-inequality atoms can be decided without rounding.  Likelihoods
are computed in the log domain in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class DuplicateOutcomeError(ValueError):
    """An alphabet was given the same outcome name twice."""


class WrongArityError(ValueError):
    """A vector's length does not match the alphabet size."""


class NegativeWeightError(ValueError):
    """A probability weight outside [0, 1]."""


class SumNotOneError(ValueError):
    """Mass function weights do not sum exactly to 1."""


class AlphabetMismatchError(ValueError):
    """Two objects built over different alphabets were combined."""


class UnknownOutcomeError(ValueError):
    """An outcome name that is not in the alphabet."""


@dataclass(frozen=True)
class OutcomeAlphabet:
    """An ordered, fixed set of at least two distinct outcome names."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(self.names) < 2:
            raise WrongArityError("alphabet needs at least 2 outcomes")
        seen = set()
        for name in self.names:
            if not name:
                raise UnknownOutcomeError("empty outcome name")
            if name in seen:
                raise DuplicateOutcomeError(f"duplicate outcome {name!r}")
            seen.add(name)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownOutcomeError(f"unknown outcome {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names


def make_alphabet(names) -> OutcomeAlphabet:
    """Build a canonical alphabet from an ordered list of outcome names."""
    return OutcomeAlphabet(tuple(names))


@dataclass(frozen=True)
class MassFunction:
    """A point on the probability simplex over an alphabet (a possible world).

    Weights are exact rationals and must sum to exactly 1.
    """

    alphabet: OutcomeAlphabet
    weights: tuple[Fraction, ...]

    def weight(self, name: str) -> Fraction:
        return self.weights[self.alphabet.index(name)]

    def as_floats(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def log_weights(self) -> np.ndarray:
        """Natural-log weights; zero weight maps to -inf."""
        return np.array(
            [math.log(w) if w > 0 else -math.inf for w in self.weights]
        )

    def __str__(self) -> str:
        pairs = ", ".join(
            f"{o}: {w}" for o, w in zip(self.alphabet.names, self.weights)
        )
        return f"({pairs})"


def mass_function(alphabet: OutcomeAlphabet, weights) -> MassFunction:
    """Validate a weight vector as a simplex point over `alphabet`.

    Accepts anything `Fraction` accepts (ints, strings like "3/10",
    Fractions); floats are rejected by Fraction-exactness of the sum check
    only if they break it, so prefer rationals.
    """
    ws = tuple(Fraction(w) for w in weights)
    if len(ws) != alphabet.size:
        raise WrongArityError(
            f"expected {alphabet.size} weights, got {len(ws)}"
        )
    for w in ws:
        if w < 0 or w > 1:
            raise NegativeWeightError(f"weight {w} outside [0, 1]")
    total = sum(ws)
    if total != 1:
        raise SumNotOneError(f"weights sum to {total}, not 1")
    return MassFunction(alphabet, ws)


def simplex_grid(alphabet: OutcomeAlphabet, resolution: int) -> list[MassFunction]:
    """All mass functions with coordinates k/N, in lexicographic order.

    The result has C(N+n-1, n-1) points and is a finite stand-in for the
    full simplex as a world set.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    n = alphabet.size
    out: list[MassFunction] = []

    def rec(prefix: list[int], remaining: int):
        if len(prefix) == n - 1:
            out.append(
                MassFunction(
                    alphabet,
                    tuple(Fraction(k, resolution) for k in prefix + [remaining]),
                )
            )
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k)

    rec([], resolution)
    return out


def euclidean_distance(mu: MassFunction, nu: MassFunction) -> float:
    """Euclidean distance between two simplex points over the same alphabet."""
    if mu.alphabet != nu.alphabet:
        raise AlphabetMismatchError("mass functions over different alphabets")
    return math.sqrt(
        sum(float(a - b) ** 2 for a, b in zip(mu.weights, nu.weights))
    )


@dataclass(frozen=True)
class Proposition:
    """A set of worlds, given as indices into a frame's world list."""

    members: frozenset[int]

    @classmethod
    def of(cls, indices) -> "Proposition":
        return cls(frozenset(indices))

    def __contains__(self, index: int) -> bool:
        return index in self.members

    def __le__(self, other: "Proposition") -> bool:
        return self.members <= other.members


def epsilon_ball(
    center: MassFunction, eps: float, worlds: list[MassFunction]
) -> Proposition:
    """Indices of worlds strictly within distance `eps` of `center`."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return Proposition.of(
        i for i, w in enumerate(worlds) if euclidean_distance(center, w) < eps
    )


@dataclass(frozen=True)
class ObservationEvent:
    """A finite multiset of observed outcomes, stored as per-outcome counts.

    Order of observations is deliberately discarded: under i.i.d. sampling
    only the counts matter.  The all-zero event is the tautological event.
    """

    alphabet: OutcomeAlphabet
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.alphabet.size:
            raise WrongArityError("counts length must match alphabet size")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def is_empty(self) -> bool:
        return self.total == 0


def empty_event(alphabet: OutcomeAlphabet) -> ObservationEvent:
    return ObservationEvent(alphabet, (0,) * alphabet.size)


def observe(alphabet: OutcomeAlphabet, sequence) -> ObservationEvent:
    """Turn a sequence of outcome names into an observation event."""
    counts = [0] * alphabet.size
    for name in sequence:
        counts[alphabet.index(name)] += 1
    return ObservationEvent(alphabet, tuple(counts))


def parse_event(alphabet: OutcomeAlphabet, text: str) -> ObservationEvent:
    """Parse whitespace-separated outcome names, e.g. ``"H H H"``."""
    return observe(alphabet, text.split())


def event_concat(e: ObservationEvent, e2: ObservationEvent) -> ObservationEvent:
    """Combine two observation events (componentwise count sum).

    Commutative and associative; the empty event is the identity.
    """
    if e.alphabet != e2.alphabet:
        raise AlphabetMismatchError("events over different alphabets")
    return ObservationEvent(
        e.alphabet, tuple(a + b for a, b in zip(e.counts, e2.counts))
    )


def log_likelihood(mu: MassFunction, e: ObservationEvent) -> float:
    """Log of the i.i.d. probability `mu` assigns to the observations in `e`.

    Zero-count outcomes contribute nothing even when their weight is 0; a
    positive count on a zero-weight outcome yields -inf.
    """
    if mu.alphabet != e.alphabet:
        raise AlphabetMismatchError("mass function and event alphabets differ")
    total = 0.0
    for c, w in zip(e.counts, mu.weights):
        if c == 0:
            continue
        if w == 0:
            return -math.inf
        total += c * math.log(w)
    return total


@dataclass(frozen=True)
class ObservationStream:
    """A finite prefix of an i.i.d. observation stream, plus its RNG seed."""

    alphabet: OutcomeAlphabet
    outcomes: tuple[int, ...]
    seed: int

    def __len__(self) -> int:
        return len(self.outcomes)

    def names(self) -> list[str]:
        return [self.alphabet.names[i] for i in self.outcomes]

    def prefix_event(self, length: int | None = None) -> ObservationEvent:
        """Counts of the first `length` observations (all, if None)."""
        part = self.outcomes if length is None else self.outcomes[:length]
        counts = [0] * self.alphabet.size
        for i in part:
            counts[i] += 1
        return ObservationEvent(self.alphabet, tuple(counts))


def sample_stream(truth: MassFunction, length: int, seed: int) -> ObservationStream:
    """Draw `length` i.i.d. outcomes from `truth`.

    Uses numpy's PCG64 generator (`default_rng`) seeded with `seed`;
    identical arguments give bit-identical streams.  Outcomes with
    probability 0 never occur.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    positive = [i for i, w in enumerate(truth.weights) if w > 0]
    probs = np.array([float(truth.weights[i]) for i in positive])
    probs = probs / probs.sum()
    draws = rng.choice(len(positive), size=length, p=probs)
    outcomes = tuple(positive[int(d)] for d in draws)
    return ObservationStream(truth.alphabet, outcomes, seed)


def worlds_to_json(alphabet: OutcomeAlphabet, worlds: list[MassFunction]) -> dict:
    """World-set JSON payload with rationals as [numerator, denominator]."""
    return {
        "alphabet": list(alphabet.names),
        "worlds": [
            [[w.numerator, w.denominator] for w in world.weights]
            for world in worlds
        ],
    }


def worlds_from_json(payload: dict) -> tuple[OutcomeAlphabet, list[MassFunction]]:
    alphabet = make_alphabet(payload["alphabet"])
    worlds = [
        mass_function(alphabet, [Fraction(num, den) for num, den in vec])
        for vec in payload["worlds"]
    ]
    return alphabet, worlds
