"""Passive linear optics as unitary maps between mode registries.

Convention: row ``i`` of a transform's matrix expands the *input*
annihilation operator ``a_i`` over the output operators,
``a_i = sum_j U[i, j] b_j``.  Creation operators therefore map as
``a_i^dagger = sum_j conj(U[i, j]) b_j^dagger``.

Unused beam-splitter input ports are explicit vacuum modes named
``v_<mode>`` so every transform is square and unitary.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import BadAngle, BadEfficiency, DuplicateMode, RegistryMismatch
from .fock import ModeRegistry, PureState, _create_combination

UNITARITY_TOLERANCE = 1e-12


def vacuum_port(mode: str) -> str:
    return f"v_{mode}"


def tilde(mode: str) -> str:
    """Label of the undetected loss mode paired with ``mode``."""
    return f"{mode}~"


def _as_registry(names) -> ModeRegistry:
    return names if isinstance(names, ModeRegistry) else ModeRegistry(tuple(names))


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= math.pi / 2) or math.isnan(theta):
        raise BadAngle(f"angle {theta} outside [0, pi/2]")
    return theta


def _cos_sin(theta: float) -> tuple[float, float]:
    """cos and sin evaluated near the closer end of [0, pi/2].

    Keeps cos(pi/4) == sin(pi/4) and cos(pi/2) == 0 bit-exactly.
    """
    comp = math.pi / 2 - theta
    c = math.cos(theta) if theta <= math.pi / 4 else math.sin(comp)
    s = math.sin(theta) if theta < math.pi / 4 else math.cos(comp)
    return c, s


def _check_efficiency(eta: float) -> float:
    eta = float(eta)
    if not (0.0 <= eta <= 1.0) or math.isnan(eta):
        raise BadEfficiency(f"efficiency {eta} outside [0, 1]")
    return eta


@dataclass(frozen=True, eq=False)
class LinearTransform:
    registry_in: ModeRegistry
    registry_out: ModeRegistry
    matrix: np.ndarray

    def __post_init__(self):
        reg_in = _as_registry(self.registry_in)
        reg_out = _as_registry(self.registry_out)
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "registry_in", reg_in)
        object.__setattr__(self, "registry_out", reg_out)
        object.__setattr__(self, "matrix", m)
        if m.shape != (len(reg_in), len(reg_out)):
            raise RegistryMismatch(
                f"matrix shape {m.shape} does not match registries "
                f"({len(reg_in)} in, {len(reg_out)} out)"
            )
        if m.shape[0] != m.shape[1]:
            raise ValueError("linear transforms must be square")

    def unitarity_error(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))

    def is_unitary(self, tol: float = UNITARITY_TOLERANCE) -> bool:
        return self.unitarity_error() < tol

    def row(self, mode: str) -> dict[str, complex]:
        """Nonzero expansion coefficients of input ``mode`` over the outputs."""
        i = self.registry_in.index(mode)
        return {
            self.registry_out.names[j]: complex(c)
            for j, c in enumerate(self.matrix[i])
            if c != 0
        }

    def reorder_output(self, names: Sequence[str]) -> LinearTransform:
        reg = _as_registry(names)
        if sorted(reg.names) != sorted(self.registry_out.names):
            raise RegistryMismatch("reordered outputs must contain the same modes")
        cols = [self.registry_out.index(n) for n in reg.names]
        return LinearTransform(self.registry_in, reg, self.matrix[:, cols])

    def reorder_input(self, names: Sequence[str]) -> LinearTransform:
        reg = _as_registry(names)
        if sorted(reg.names) != sorted(self.registry_in.names):
            raise RegistryMismatch("reordered inputs must contain the same modes")
        rows = [self.registry_in.index(n) for n in reg.names]
        return LinearTransform(reg, self.registry_out, self.matrix[rows, :])

    def then(self, other: LinearTransform) -> LinearTransform:
        """Apply ``self`` first, then ``other`` (``other`` composed after ``self``)."""
        return other @ self

    def __matmul__(self, other: LinearTransform) -> LinearTransform:
        """``self @ other`` is the composition ``self o other``: ``other`` acts first."""
        if sorted(other.registry_out.names) != sorted(self.registry_in.names):
            raise RegistryMismatch(
                f"cannot compose: {other.registry_out.names} -> {self.registry_in.names}"
            )
        first = self.reorder_input(other.registry_out.names)
        return LinearTransform(other.registry_in, self.registry_out, other.matrix @ first.matrix)


def identity(modes: Iterable[str]) -> LinearTransform:
    reg = _as_registry(tuple(modes))
    return LinearTransform(reg, reg, np.eye(len(reg)))


def direct_sum(*transforms: LinearTransform) -> LinearTransform:
    """Block-diagonal combination of transforms on disjoint modes."""
    reg_in = ModeRegistry(tuple(n for t in transforms for n in t.registry_in.names))
    reg_out = ModeRegistry(tuple(n for t in transforms for n in t.registry_out.names))
    m = np.zeros((len(reg_in), len(reg_out)), dtype=complex)
    i = j = 0
    for t in transforms:
        r, c = t.matrix.shape
        m[i : i + r, j : j + c] = t.matrix
        i += r
        j += c
    return LinearTransform(reg_in, reg_out, m)


def passthrough(t: LinearTransform, modes: Iterable[str]) -> LinearTransform:
    """Extend ``t`` with identity on ``modes`` (which must be new labels)."""
    modes = tuple(modes)
    if not modes:
        return t
    return direct_sum(t, identity(modes))


def _mixer(cos: float, sin: float, completion_phase: complex, reflection_phase: complex):
    # rows: (signal input, vacuum port); columns: (transmitted, reflected)
    return np.array(
        [
            [cos, sin * reflection_phase],
            [-sin * completion_phase, cos * completion_phase * reflection_phase],
        ],
        dtype=complex,
    )


def beam_splitter(
    x_modes: tuple[str, str, str],
    y_modes: tuple[str, str, str],
    theta: float,
    *,
    completion_phase: complex = 1.0,
    reflection_phase: complex = 1.0,
) -> LinearTransform:
    """Polarization-independent beam splitter with amplitude transmission ``cos(theta)``.

    Each of ``x_modes`` / ``y_modes`` is ``(input, transmitted, reflected)``.
    The input registry is ``(in_x, in_y, v_in_x, v_in_y)`` and the output
    registry ``(trans_x, trans_y, refl_x, refl_y)``.  Per polarization the
    block is ``[[cos, sin], [-sin, cos]]``; ``completion_phase`` multiplies
    the vacuum-port row and ``reflection_phase`` the reflected column, both
    alternative unitary completions of the same physical element.
    """
    theta = _check_angle(theta)
    (ix, tx, rx), (iy, ty, ry) = x_modes, y_modes
    outputs = (tx, ty, rx, ry)
    if len(set(outputs)) != 4 or ix == iy:
        raise DuplicateMode(f"beam splitter needs distinct modes, got {x_modes}, {y_modes}")
    if not (np.isclose(abs(completion_phase), 1) and np.isclose(abs(reflection_phase), 1)):
        raise ValueError("completion and reflection phases must have unit modulus")
    block = _mixer(*_cos_sin(theta), completion_phase, reflection_phase)
    m = np.zeros((4, 4), dtype=complex)
    # polarization p: input row p, vacuum row p + 2; transmitted col p, reflected col p + 2
    for p in (0, 1):
        m[np.ix_([p, p + 2], [p, p + 2])] = block
    return LinearTransform(
        ModeRegistry((ix, iy, vacuum_port(ix), vacuum_port(iy))), ModeRegistry(outputs), m
    )


def half_wave_rotation(f_x: str, f_y: str, f_xp: str, f_yp: str) -> LinearTransform:
    """Change of basis to the pi/4-rotated polarization modes.

    ``f_x = (f_x' + f_y')/sqrt(2)`` and ``f_y = (f_x' - f_y')/sqrt(2)``.
    The matrix is its own inverse.
    """
    if len({f_x, f_y}) != 2 or len({f_xp, f_yp}) != 2:
        raise DuplicateMode("half-wave rotation needs distinct modes")
    h = 1 / math.sqrt(2)
    return LinearTransform(
        ModeRegistry((f_x, f_y)), ModeRegistry((f_xp, f_yp)), [[h, h], [h, -h]]
    )


def attach_loss(
    t: LinearTransform,
    detected_modes: Sequence[str],
    eta: float | Mapping[str, float] | Sequence[float],
) -> LinearTransform:
    """Model detector inefficiency by mixing each detected mode with a loss mode.

    Every detected output ``m`` is replaced by ``sqrt(eta) m + sqrt(1-eta) m~``,
    where ``m~`` is a fresh undetected mode; a vacuum input ``v_m~`` completes
    the mixing to a unitary.  The result maps
    ``t.registry_in + (v_m~, ...)`` to ``t.registry_out + (m~, ...)``.
    """
    detected = tuple(detected_modes)
    if len(set(detected)) != len(detected):
        raise DuplicateMode(f"detected modes repeat: {detected}")
    if isinstance(eta, Mapping):
        etas = [eta[m] for m in detected]
    elif isinstance(eta, (int, float, np.floating)):
        etas = [eta] * len(detected)
    else:
        etas = list(eta)
        if len(etas) != len(detected):
            raise ValueError("need one efficiency per detected mode")
    etas = [_check_efficiency(e) for e in etas]
    for m in detected:
        t.registry_out.index(m)

    ports = tuple(vacuum_port(tilde(m)) for m in detected)
    blocks = []
    for m, e in zip(detected, etas):
        mix = _mixer(math.sqrt(e), math.sqrt(1 - e), 1.0, 1.0)
        blocks.append(LinearTransform((m, vacuum_port(tilde(m))), (m, tilde(m)), mix))
    others = tuple(n for n in t.registry_out.names if n not in detected)
    loss = direct_sum(identity(others), *blocks) if others else direct_sum(*blocks)
    combined = loss @ passthrough(t, ports)
    return combined.reorder_output(t.registry_out.names + tuple(tilde(m) for m in detected))


def apply_transform(state: PureState, t: LinearTransform) -> PureState:
    """Propagate a Fock state through ``t`` by multinomial expansion.

    Each input ket ``prod_i (a_i^dagger)^{n_i} / sqrt(n_i!) |vac>`` is rebuilt
    on the output registry by applying the image of every creation operator
    in turn.  Photon number per term is conserved exactly.
    """
    if state.registry != t.registry_in:
        raise RegistryMismatch(
            f"state registry {state.registry.names} != transform input {t.registry_in.names}"
        )
    conj = t.matrix.conj()
    images = [
        [(j, complex(c)) for j, c in enumerate(conj[i]) if abs(c) > 0] for i in range(len(conj))
    ]
    out_vac = (0,) * len(t.registry_out)
    result: dict = {}
    for occ, amp in state:
        if amp == 0:
            continue
        norm = math.prod(math.factorial(k) for k in occ)
        terms = {out_vac: amp / math.sqrt(norm)}
        for i, k in enumerate(occ):
            for _ in range(k):
                terms = _create_combination(terms, images[i], state.n_max)
        for o, a in terms.items():
            result[o] = result.get(o, 0j) + a
    return PureState._trusted(t.registry_out, result, state.n_max)


@dataclass(frozen=True)
class SetupParams:
    """Beam-splitter angles; amplitude transmissions are ``cos(theta_a)``, ``cos(theta_b)``."""

    theta_a: float
    theta_b: float

    def __post_init__(self):
        object.__setattr__(self, "theta_a", _check_angle(self.theta_a))
        object.__setattr__(self, "theta_b", _check_angle(self.theta_b))

    @classmethod
    def symmetric(cls, theta: float) -> SetupParams:
        return cls(theta, theta)

    @classmethod
    def from_power_transmission(cls, t_a: float, t_b: float | None = None) -> SetupParams:
        """Angles from power transmissions ``cos^2(theta)``."""
        t_b = t_a if t_b is None else t_b
        return cls(math.acos(math.sqrt(t_a)), math.acos(math.sqrt(t_b)))


SOURCE_MODES = ("a_x", "a_y", "b_x", "b_y")
OUTPUT_MODES = ("c_x", "c_y", "d_x", "d_y")
TRIGGER_MODES = ("e_x", "e_y", "f_x'", "f_y'")


def setup_transform(
    params: SetupParams,
    *,
    completion_phase: complex = 1.0,
    reflection_phase: complex = 1.0,
) -> LinearTransform:
    """BS1 on the a-beam, BS2 on the b-beam, then the half-wave rotation of f.

    Inputs: the four source modes followed by their vacuum ports.
    Outputs: ``OUTPUT_MODES + TRIGGER_MODES``.
    """
    kw = dict(completion_phase=completion_phase, reflection_phase=reflection_phase)
    bs1 = beam_splitter(("a_x", "c_x", "e_x"), ("a_y", "c_y", "e_y"), params.theta_a, **kw)
    bs2 = beam_splitter(("b_x", "d_x", "f_x"), ("b_y", "d_y", "f_y"), params.theta_b, **kw)
    hwp = half_wave_rotation("f_x", "f_y", "f_x'", "f_y'")
    arms = direct_sum(bs1, bs2).reorder_input(
        SOURCE_MODES + tuple(vacuum_port(m) for m in SOURCE_MODES)
    )
    full = passthrough(hwp, ("c_x", "c_y", "e_x", "e_y", "d_x", "d_y")) @ arms
    return full.reorder_output(OUTPUT_MODES + TRIGGER_MODES)
