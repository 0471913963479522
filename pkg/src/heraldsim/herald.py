"""Conditional state preparation by fourfold single-photon heralding.

A source state on ``(a_x, a_y, b_x, b_y)`` is sent through the two beam
splitters and the half-wave rotation, the trigger modes
``(e_x, e_y, f_x', f_y')`` are projected onto the requested photon
counts, and the remaining output modes ``(c_x, c_y, d_x, d_y)`` carry the
heralded state.  With lossy detectors the undetected loss modes are traced
out, which turns the conditional state into an ensemble.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import RegistryMismatch, ZeroTrace
from .fock import (
    ModeRegistry,
    PureState,
    StateEnsemble,
    project_pattern,
    project_state,
)
from .optics import (
    OUTPUT_MODES,
    SOURCE_MODES,
    TRIGGER_MODES,
    LinearTransform,
    SetupParams,
    _check_efficiency,
    apply_transform,
    attach_loss,
    beam_splitter,
    direct_sum,
    identity,
    setup_transform,
    tilde,
)

PROBABILITY_FLOOR = 1e-14
OUTPUT_REGISTRY = ModeRegistry(OUTPUT_MODES)


def target_state(n_max: int = 2) -> PureState:
    """``(c_x^+ d_x^+ + c_y^+ d_y^+)|vac> / sqrt(2)`` on ``(c_x, c_y, d_x, d_y)``."""
    h = 1 / math.sqrt(2)
    return PureState(OUTPUT_REGISTRY, {(1, 0, 1, 0): h, (0, 1, 0, 1): h}, n_max)


@dataclass(frozen=True)
class HeraldPattern:
    requirements: Mapping[str, int] = field(
        default_factory=lambda: {m: 1 for m in TRIGGER_MODES}
    )

    def __post_init__(self):
        req = dict(self.requirements)
        for mode, count in req.items():
            if mode not in TRIGGER_MODES:
                raise RegistryMismatch(f"{mode!r} is not a trigger mode {TRIGGER_MODES}")
            if count < 0:
                raise ValueError(f"negative count {count} for {mode}")
        object.__setattr__(self, "requirements", req)


@dataclass(frozen=True)
class DetectorModel:
    """Per-trigger-mode detection efficiency."""

    efficiency: Mapping[str, float]

    def __post_init__(self):
        eff = dict(self.efficiency)
        if set(eff) != set(TRIGGER_MODES):
            raise RegistryMismatch(f"need an efficiency for each of {TRIGGER_MODES}")
        object.__setattr__(self, "efficiency", {m: _check_efficiency(eff[m]) for m in TRIGGER_MODES})

    @classmethod
    def uniform(cls, eta: float) -> DetectorModel:
        return cls({m: eta for m in TRIGGER_MODES})


@dataclass(frozen=True)
class HeraldOutcome:
    """Result of a heralding run.

    ``conditional`` is unnormalized: its trace equals ``probability``.
    Probabilities below ``PROBABILITY_FLOOR`` are reported as exactly 0 and
    the fidelity is then undefined; ``raw_probability`` keeps the unfloored
    squared norm of the projected state.
    """

    probability: float
    conditional: StateEnsemble
    raw_probability: float = 0.0

    @property
    def fidelity(self) -> float:
        if self.probability == 0.0:
            raise ZeroTrace("no heralding events: fidelity undefined")
        return fidelity(self.conditional, target_state())

    @property
    def heralded(self) -> bool:
        return self.probability > 0.0


def fidelity(ensemble: StateEnsemble, target: PureState | None = None) -> float:
    """``sqrt(<target|rho|target> / Tr rho)``."""
    target = target_state() if target is None else target
    tr = ensemble.trace()
    if tr <= 0.0:
        raise ZeroTrace("ensemble has zero trace")
    return min(1.0, math.sqrt(max(ensemble.expectation(target) / tr, 0.0)))


def _prepare_input(state: PureState, t: LinearTransform) -> PureState:
    """Pad a source-mode state with vacuum on the transform's extra inputs."""
    names = state.registry.names
    missing = [n for n in t.registry_in.names if n not in state.registry]
    if any(n not in t.registry_in for n in names):
        raise RegistryMismatch(f"input modes {names} not accepted by {t.registry_in.names}")
    return state.extended(missing).reordered(t.registry_in)


def _outcome(reduced: PureState, traced: tuple[str, ...]) -> HeraldOutcome:
    """Split the post-measurement ket by occupation of ``traced`` modes."""
    keep = [reduced.registry.index(m) for m in OUTPUT_MODES]
    drop = [reduced.registry.index(m) for m in traced]
    groups: dict[tuple, dict] = {}
    for occ, amp in reduced:
        key = tuple(occ[i] for i in drop)
        out = tuple(occ[i] for i in keep)
        branch = groups.setdefault(key, {})
        branch[out] = branch.get(out, 0j) + amp
    kets = [PureState(OUTPUT_REGISTRY, groups[k], reduced.n_max) for k in sorted(groups)]
    ensemble = StateEnsemble.from_unnormalized(kets)
    raw = reduced.norm_squared()
    p = ensemble.trace()
    if p < PROBABILITY_FLOOR:
        return HeraldOutcome(0.0, StateEnsemble(), raw)
    return HeraldOutcome(p, ensemble, raw)


def _herald(state: PureState, t: LinearTransform, pattern: HeraldPattern, traced=()) -> HeraldOutcome:
    out = apply_transform(_prepare_input(state, t), t)
    reduced = project_pattern(out, pattern.requirements)
    # trigger modes absent from the pattern are unmonitored and traced out too
    unmonitored = tuple(m for m in TRIGGER_MODES if m not in pattern.requirements)
    return _outcome(reduced, unmonitored + tuple(traced))


def ideal_herald(
    state: PureState,
    setup: SetupParams,
    pattern: HeraldPattern | None = None,
    **conventions,
) -> HeraldOutcome:
    """Herald with photon-number-resolving unit-efficiency detectors.

    ``conventions`` (``completion_phase``, ``reflection_phase``) select an
    alternative but physically equivalent beam-splitter matrix.
    """
    pattern = HeraldPattern() if pattern is None else pattern
    return _herald(state, setup_transform(setup, **conventions), pattern)


def lossy_herald(
    state: PureState,
    setup: SetupParams,
    detectors: DetectorModel | float,
    pattern: HeraldPattern | None = None,
    **conventions,
) -> HeraldOutcome:
    """Herald with inefficient detectors; loss modes are traced out."""
    pattern = HeraldPattern() if pattern is None else pattern
    if not isinstance(detectors, DetectorModel):
        detectors = DetectorModel.uniform(detectors)
    t = lossy_transform(setup, detectors, **conventions)
    return _herald(state, t, pattern, tuple(tilde(m) for m in TRIGGER_MODES))


def lossy_transform(setup: SetupParams, detectors: DetectorModel, **conventions) -> LinearTransform:
    return attach_loss(setup_transform(setup, **conventions), TRIGGER_MODES, detectors.efficiency)


def intermediate_collapse(
    state: PureState,
    setup: SetupParams,
    pattern: Mapping[str, int] | None = None,
) -> PureState:
    """Act with BS1 only and project its reflected modes.

    Returns the unnormalized ket on ``(c_x, c_y, b_x, b_y)``; the b-beam has
    not yet met BS2.  ``pattern`` defaults to one photon in each of
    ``e_x`` and ``e_y``; an empty pattern returns the BS1 output unchanged.
    """
    pattern = {"e_x": 1, "e_y": 1} if pattern is None else dict(pattern)
    if any(m not in ("e_x", "e_y") for m in pattern):
        raise RegistryMismatch("intermediate collapse measures e_x / e_y only")
    bs1 = beam_splitter(("a_x", "c_x", "e_x"), ("a_y", "c_y", "e_y"), setup.theta_a)
    t = direct_sum(bs1, identity(("b_x", "b_y"))).reorder_output(
        ("c_x", "c_y", "b_x", "b_y", "e_x", "e_y")
    )
    out = apply_transform(_prepare_input(state, t), t)
    return project_pattern(out, pattern)


def collapse_f_arm(state: PureState, setup: SetupParams, f_ket: PureState) -> PureState:
    """Send the b-beam of ``state`` through BS2 and project ``(f_x, f_y)`` onto ``f_ket``.

    ``state`` lives on ``(c_x, c_y, b_x, b_y)``; the result lives on
    ``(c_x, c_y, d_x, d_y)``.
    """
    bs2 = beam_splitter(("b_x", "d_x", "f_x"), ("b_y", "d_y", "f_y"), setup.theta_b)
    t = direct_sum(identity(("c_x", "c_y")), bs2)
    out = apply_transform(_prepare_input(state, t), t)
    return project_state(out, f_ket.reordered(("f_x", "f_y")))


__all__ = [
    "DetectorModel",
    "HeraldOutcome",
    "HeraldPattern",
    "PROBABILITY_FLOOR",
    "SOURCE_MODES",
    "collapse_f_arm",
    "fidelity",
    "ideal_herald",
    "intermediate_collapse",
    "lossy_herald",
    "lossy_transform",
    "target_state",
]
