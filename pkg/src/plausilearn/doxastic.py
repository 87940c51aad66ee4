"""Probabilistic plausibility frames and models, belief operators, updates.

Knowledge is truth in every world of the frame; belief is truth in every
maximally plausible world (the two coincide with the "plausible enough"
definitions on finite world sets).  Two updates are supported: sampling
evidence reweights plausibility and keeps the world set, higher-order
propositional information shrinks the world set and keeps plausibility.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .plausibility import (
    CENTRE_OF_MASS,
    ENTROPY,
    PlausibilityFn,
    PlausibilityState,
    argmax_restricted,
    argmax_worlds,
    condition,
    init_state,
    restrict_state,
    tabulated,
)
from .simplex import (
    MassFunction,
    ObservationEvent,
    OutcomeAlphabet,
    Proposition,
    make_alphabet,
    simplex_grid,
    worlds_from_json,
)


class EmptyUpdateError(ValueError):
    """Propositional update with the empty proposition."""


@dataclass(frozen=True)
class Frame:
    """A set of candidate distributions plus a plausibility state over them."""

    worlds: tuple[MassFunction, ...]
    state: PlausibilityState

    def __post_init__(self):
        if self.worlds != self.state.worlds:
            raise ValueError("frame worlds must match the state's worlds")

    @property
    def all_worlds(self) -> Proposition:
        return Proposition.of(range(len(self.worlds)))

    def world_index(self, world: MassFunction) -> int:
        try:
            return self.worlds.index(world)
        except ValueError:
            raise KeyError(f"world {world} not in frame") from None


@dataclass(frozen=True)
class Model:
    """A frame over an outcome alphabet (the valuation maps each outcome to
    its cylinder event, which the i.i.d. assumption makes position-free)."""

    frame: Frame
    alphabet: OutcomeAlphabet

    @property
    def worlds(self) -> tuple[MassFunction, ...]:
        return self.frame.worlds


def make_frame(worlds, fn: PlausibilityFn) -> Frame:
    worlds = tuple(worlds)
    return Frame(worlds, init_state(worlds, fn))


def make_model(worlds, fn: PlausibilityFn) -> Model:
    frame = make_frame(worlds, fn)
    return Model(frame, frame.worlds[0].alphabet)


def knowledge_holds(frame: Frame, p: Proposition) -> bool:
    """True iff every world of the frame is in `p`."""
    return frame.all_worlds.members <= p.members


def belief_holds(frame: Frame, p: Proposition) -> bool:
    """True iff every maximally plausible world is in `p`."""
    return argmax_worlds(frame.state) <= p


def conditional_belief_event(
    frame: Frame, p: Proposition, e: ObservationEvent
) -> bool:
    """Belief in `p` after conditioning plausibility on the evidence `e`.

    The frame itself is not mutated.
    """
    return argmax_worlds(condition(frame.state, e)) <= p


def conditional_belief_prop(frame: Frame, p: Proposition, q: Proposition) -> bool:
    """Belief in `p` given the higher-order information `q`.

    True iff the most plausible q-worlds are all in p; vacuously true when
    q is empty.
    """
    if not q.members:
        return True
    return argmax_restricted(frame.state, q) <= p


def update_sampling(model: Model, e: ObservationEvent) -> Model:
    """Model after sampling evidence: same worlds, conditioned plausibility."""
    frame = model.frame
    return Model(Frame(frame.worlds, condition(frame.state, e)), model.alphabet)


def update_proposition(model: Model, p: Proposition) -> Model:
    """Model after learning the proposition `p`: worlds restricted to `p`,
    plausibility values carried over unchanged."""
    if not p.members:
        raise EmptyUpdateError("cannot update with the empty proposition")
    state = restrict_state(model.frame.state, p)
    return Model(Frame(state.worlds, state), model.alphabet)


# ---------------------------------------------------------------------------
# Model files

_PLAUSIBILITY_NAMES = {"entropy": ENTROPY, "centre_of_mass": CENTRE_OF_MASS}


def _plausibility_from_spec(spec) -> PlausibilityFn:
    if isinstance(spec, str):
        if spec not in _PLAUSIBILITY_NAMES:
            raise ValueError(f"unknown plausibility {spec!r}")
        return _PLAUSIBILITY_NAMES[spec]
    if isinstance(spec, dict) and "table" in spec:
        return tabulated(spec["table"])
    raise ValueError(f"bad plausibility spec {spec!r}")


def _plausibility_to_spec(fn: PlausibilityFn):
    if fn.kind == "tabulated":
        return {"table": {str(k): v for k, v in fn.table.items()}}
    return fn.kind


def model_from_dict(payload: dict) -> Model:
    """Build a model from its JSON dictionary form.

    Schema: ``{"alphabet": [...], "grid_resolution": N | "worlds": [...],
    "plausibility": "entropy" | "centre_of_mass" | {"table": ...},
    "conditioned_on": [counts]}``.
    """
    alphabet = make_alphabet(payload["alphabet"])
    if "worlds" in payload:
        _, worlds = worlds_from_json(
            {"alphabet": payload["alphabet"], "worlds": payload["worlds"]}
        )
    elif "grid_resolution" in payload:
        worlds = simplex_grid(alphabet, int(payload["grid_resolution"]))
    else:
        raise ValueError("model needs either 'worlds' or 'grid_resolution'")
    fn = _plausibility_from_spec(payload.get("plausibility", "entropy"))
    model = make_model(worlds, fn)
    conditioned = payload.get("conditioned_on")
    if conditioned:
        event = ObservationEvent(alphabet, tuple(int(c) for c in conditioned))
        model = update_sampling(model, event)
    return model


def model_to_dict(model: Model, fn: PlausibilityFn) -> dict:
    """Serialize a model built from `fn`; records accumulated evidence."""
    return {
        "alphabet": list(model.alphabet.names),
        "worlds": [
            [[w.numerator, w.denominator] for w in world.weights]
            for world in model.worlds
        ],
        "plausibility": _plausibility_to_spec(fn),
        "conditioned_on": list(model.frame.state.event.counts),
    }


def load_model(path) -> Model:
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def save_model(path, model: Model, fn: PlausibilityFn) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model, fn), fh, sort_keys=True, indent=1)
        fh.write("\n")
