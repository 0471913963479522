"""Sparse multimode bosonic Fock-space algebra.

States are finite superpositions of occupation-number kets over an ordered
set of labeled modes.  Everything here is an immutable value: operations
return new objects and never mutate their inputs.

Example
-------
>>> reg = ModeRegistry(("a_x", "a_y", "b_x", "b_y"))
>>> s = apply_creation(vacuum(reg), "a_x")
>>> s.amplitude((1, 0, 0, 0))
(1+0j)
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Union

import numpy as np

from .errors import DuplicateMode, RegistryMismatch, TruncationExceeded

Occupation = tuple[int, ...]
Mode = Union[str, int]

DEFAULT_N_MAX = 8
PRUNE_EPSILON = 1e-14
NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ModeRegistry:
    """Ordered, duplicate-free collection of mode labels."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DuplicateMode(f"duplicate mode labels: {dupes}")

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, mode) -> bool:
        return mode in self._positions

    def index(self, mode: Mode) -> int:
        """Position of ``mode`` (a label or an integer index)."""
        if isinstance(mode, (int, np.integer)):
            if not 0 <= mode < len(self.names):
                raise RegistryMismatch(f"mode index {mode} out of range for {self.names}")
            return int(mode)
        try:
            return self._positions[mode]
        except KeyError:
            raise RegistryMismatch(f"mode {mode!r} not in registry {self.names}") from None

    def extended(self, names: Iterable[str]) -> ModeRegistry:
        return ModeRegistry(self.names + tuple(names))

    def without(self, names: Iterable[str]) -> ModeRegistry:
        drop = set(names)
        return ModeRegistry(tuple(n for n in self.names if n not in drop))


def _check_terms(registry: ModeRegistry, terms, n_max: int) -> dict[Occupation, complex]:
    size = len(registry)
    out: dict[Occupation, complex] = {}
    for occ, amp in terms:
        occ = tuple(int(k) for k in occ)
        if len(occ) != size:
            raise RegistryMismatch(
                f"occupation {occ} has length {len(occ)}, registry has {size} modes"
            )
        if any(k < 0 for k in occ):
            raise ValueError(f"negative occupation in {occ}")
        if sum(occ) > n_max:
            raise TruncationExceeded(f"occupation {occ} exceeds n_max={n_max}")
        out[occ] = out.get(occ, 0j) + complex(amp)
    return out


class PureState:
    """Sparse ket: a map from occupation tuples to complex amplitudes.

    Terms are kept in lexicographic order of their occupation tuples, so
    iteration and serialization are deterministic.  Exact zeros are kept;
    use :meth:`compact` or :meth:`normalized` to prune tiny amplitudes.
    """

    __slots__ = ("registry", "n_max", "_terms")

    def __init__(
        self,
        registry: ModeRegistry | Sequence[str],
        terms: Mapping[Occupation, complex] | Iterable[tuple[Occupation, complex]] = (),
        n_max: int = DEFAULT_N_MAX,
    ):
        if not isinstance(registry, ModeRegistry):
            registry = ModeRegistry(tuple(registry))
        if isinstance(terms, Mapping):
            terms = terms.items()
        checked = _check_terms(registry, terms, n_max)
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "n_max", int(n_max))
        object.__setattr__(self, "_terms", dict(sorted(checked.items())))

    @classmethod
    def _trusted(cls, registry: ModeRegistry, terms: dict, n_max: int) -> PureState:
        # internal constructor: caller guarantees valid occupations
        self = object.__new__(cls)
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "n_max", n_max)
        object.__setattr__(self, "_terms", dict(sorted(terms.items())))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def terms(self) -> Mapping[Occupation, complex]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self._terms.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{occ}: {amp:.6g}" for occ, amp in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"PureState({list(self.registry.names)}, {{{body}{more}}})"

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return self._terms.get(tuple(occupation), 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self._terms.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_squared() - 1.0) < NORM_TOLERANCE

    def photon_numbers(self) -> set[int]:
        return {sum(occ) for occ in self._terms}

    def compact(self, epsilon: float = PRUNE_EPSILON) -> PureState:
        """Drop terms with ``|amp| < epsilon``."""
        kept = {o: a for o, a in self._terms.items() if abs(a) >= epsilon}
        return PureState._trusted(self.registry, kept, self.n_max)

    def normalized(self, epsilon: float = PRUNE_EPSILON) -> PureState:
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return (self / n).compact(epsilon)

    def _same_space(self, other: PureState) -> None:
        if self.registry != other.registry:
            raise RegistryMismatch(
                f"registries differ: {self.registry.names} vs {other.registry.names}"
            )

    def __add__(self, other: PureState) -> PureState:
        self._same_space(other)
        terms = dict(self._terms)
        for occ, amp in other:
            terms[occ] = terms.get(occ, 0j) + amp
        return PureState._trusted(self.registry, terms, max(self.n_max, other.n_max))

    def __neg__(self) -> PureState:
        return self * -1

    def __sub__(self, other: PureState) -> PureState:
        return self + (-other)

    def __mul__(self, scalar) -> PureState:
        c = complex(scalar)
        return PureState._trusted(
            self.registry, {o: c * a for o, a in self._terms.items()}, self.n_max
        )

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> PureState:
        return self * (1.0 / complex(scalar))

    def allclose(self, other: PureState, atol: float = 1e-12) -> bool:
        """Term-wise comparison; missing terms count as zero."""
        self._same_space(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= atol for k in keys)

    def extended(self, names: Iterable[str]) -> PureState:
        """Embed into a larger registry; the new modes are in vacuum."""
        names = tuple(names)
        registry = self.registry.extended(names)
        pad = (0,) * len(names)
        return PureState._trusted(
            registry, {occ + pad: a for occ, a in self._terms.items()}, self.n_max
        )

    def reordered(self, registry: ModeRegistry | Sequence[str]) -> PureState:
        """Same state expressed in a permuted registry."""
        if not isinstance(registry, ModeRegistry):
            registry = ModeRegistry(tuple(registry))
        if sorted(registry.names) != sorted(self.registry.names):
            raise RegistryMismatch("reordered registry must contain the same modes")
        perm = [self.registry.index(n) for n in registry.names]
        terms = {tuple(occ[p] for p in perm): a for occ, a in self._terms.items()}
        return PureState._trusted(registry, terms, self.n_max)

    def to_text(self) -> str:
        return serialize(self)

    def to_dense(self, cutoff: int) -> np.ndarray:
        """Dense tensor of shape ``(cutoff + 1,) * n_modes``."""
        arr = np.zeros((cutoff + 1,) * len(self.registry), dtype=complex)
        for occ, amp in self._terms.items():
            if max(occ, default=0) > cutoff:
                raise TruncationExceeded(f"occupation {occ} exceeds dense cutoff {cutoff}")
            arr[occ] = amp
        return arr


def vacuum(registry: ModeRegistry | Sequence[str], n_max: int = DEFAULT_N_MAX) -> PureState:
    if not isinstance(registry, ModeRegistry):
        registry = ModeRegistry(tuple(registry))
    if len(registry) == 0:
        raise ValueError("vacuum needs a non-empty registry")
    return PureState._trusted(registry, {(0,) * len(registry): 1 + 0j}, n_max)


def _create_combination(
    terms: Mapping[Occupation, complex],
    coefficients: Sequence[tuple[int, complex]],
    n_max: int,
) -> dict[Occupation, complex]:
    """Apply ``sum_j c_j a_j^dagger`` to a raw term dict."""
    out: dict[Occupation, complex] = {}
    for occ, amp in terms.items():
        if sum(occ) + 1 > n_max:
            raise TruncationExceeded(f"creating a photon on {occ} exceeds n_max={n_max}")
        for j, c in coefficients:
            k = occ[j]
            new = occ[:j] + (k + 1,) + occ[j + 1 :]
            out[new] = out.get(new, 0j) + c * amp * math.sqrt(k + 1)
    return out


def apply_creation(state: PureState, mode: Mode) -> PureState:
    """``a_mode^dagger |state>``; raises TruncationExceeded past ``n_max``."""
    j = state.registry.index(mode)
    terms = _create_combination(state.terms, [(j, 1.0)], state.n_max)
    return PureState._trusted(state.registry, terms, state.n_max)


def apply_creation_combination(state: PureState, coefficients: Mapping[Mode, complex]) -> PureState:
    """Apply the linear combination ``sum_j c_j a_j^dagger``."""
    coeffs = [(state.registry.index(m), complex(c)) for m, c in coefficients.items() if c != 0]
    terms = _create_combination(state.terms, coeffs, state.n_max)
    return PureState._trusted(state.registry, terms, state.n_max)


def inner(lhs: PureState, rhs: PureState) -> complex:
    """``<lhs|rhs>``, conjugate-linear in ``lhs``."""
    lhs._same_space(rhs)
    left, right = lhs._terms, rhs._terms
    if len(left) <= len(right):
        total = sum((a.conjugate() * right[o] for o, a in left.items() if o in right), 0j)
    else:
        total = sum((left[o].conjugate() * b for o, b in right.items() if o in left), 0j)
    return complex(total)


def project_state(state: PureState, bra: PureState) -> PureState:
    """Contract ``<bra|`` over ``bra``'s modes, leaving the remaining modes.

    ``bra`` lives on a registry that is a strict subset of ``state``'s.  The
    result is unnormalized; its squared norm is the probability of finding
    the measured modes in ``bra`` (for normalized inputs).
    """
    measured = [state.registry.index(m) for m in bra.registry.names]
    if len(measured) >= len(state.registry):
        raise RegistryMismatch("projected modes must be a strict subset of the registry")
    rest_registry = state.registry.without(bra.registry.names)
    rest = [state.registry.index(m) for m in rest_registry.names]
    bra_terms = bra.terms
    out: dict[Occupation, complex] = {}
    for occ, amp in state:
        key = tuple(occ[i] for i in measured)
        b = bra_terms.get(key)
        if b is None:
            continue
        r = tuple(occ[i] for i in rest)
        out[r] = out.get(r, 0j) + b.conjugate() * amp
    return PureState._trusted(rest_registry, out, state.n_max)


def project_pattern(state: PureState, pattern: Mapping[Mode, int]) -> PureState:
    """Project the pattern modes onto definite photon counts.

    Returns the unnormalized reduced state on the remaining modes, which keep
    their order.  ``||result||**2`` is the probability of the pattern.
    """
    names = tuple(state.registry.names[state.registry.index(m)] for m in pattern)
    counts = tuple(int(c) for c in pattern.values())
    if any(c < 0 for c in counts):
        raise ValueError("pattern counts must be non-negative")
    if len(set(names)) != len(names):
        raise DuplicateMode(f"pattern repeats a mode: {names}")
    if not names:
        return state
    bra = PureState._trusted(ModeRegistry(names), {counts: 1 + 0j}, max(state.n_max, sum(counts)))
    return project_state(state, bra)


@dataclass(frozen=True)
class StateEnsemble:
    """Incoherent mixture ``sum_k w_k |psi_k><psi_k|`` of normalized kets.

    Weights need not sum to one; the trace then carries a probability.
    """

    branches: tuple[tuple[float, PureState], ...] = ()

    def __post_init__(self):
        branches = tuple((float(w), s) for w, s in self.branches)
        object.__setattr__(self, "branches", branches)
        for w, s in branches:
            if w < 0:
                raise ValueError(f"negative ensemble weight {w}")
            if not s.is_normalized:
                raise ValueError("ensemble branches must be normalized states")
        if len({s.registry for _, s in branches}) > 1:
            raise RegistryMismatch("ensemble branches live on different registries")

    @classmethod
    def from_unnormalized(
        cls, states: Iterable[PureState], epsilon: float = PRUNE_EPSILON
    ) -> StateEnsemble:
        """Weight each ket by its squared norm; kets with norm below epsilon are dropped."""
        branches = []
        for s in states:
            w = s.norm_squared()
            if math.sqrt(w) >= epsilon:
                branches.append((w, s.normalized()))
        return cls(tuple(branches))

    @property
    def registry(self) -> ModeRegistry | None:
        return self.branches[0][1].registry if self.branches else None

    def __len__(self) -> int:
        return len(self.branches)

    def trace(self) -> float:
        return float(sum(w for w, _ in self.branches))

    def expectation(self, target: PureState) -> float:
        """``<target| rho |target>``."""
        return float(sum(w * abs(inner(target, s)) ** 2 for w, s in self.branches))

    def density_matrix(
        self, basis: Sequence[Occupation] | None = None
    ) -> tuple[list[Occupation], np.ndarray]:
        """Dense density matrix on ``basis`` (default: every occupied ket, sorted)."""
        if basis is None:
            basis = sorted({occ for _, s in self.branches for occ in s.terms})
        basis = [tuple(b) for b in basis]
        rho = np.zeros((len(basis), len(basis)), dtype=complex)
        for w, s in self.branches:
            v = np.array([s.amplitude(b) for b in basis])
            rho += w * np.outer(v, v.conj())
        return basis, rho


def _fmt(x: float) -> str:
    return f"{x + 0.0:.16e}"


def serialize(state: PureState) -> str:
    """One line per term: ``<n1,n2,...> <re> <im>`` in lexicographic order."""
    lines = [
        f"{','.join(map(str, occ))} {_fmt(amp.real)} {_fmt(amp.imag)}" for occ, amp in state
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse(text: str, registry: ModeRegistry | Sequence[str], n_max: int = DEFAULT_N_MAX) -> PureState:
    terms = []
    for line in text.splitlines():
        if not line.strip():
            continue
        occ, re, im = line.split()
        terms.append((tuple(int(k) for k in occ.split(",")), complex(float(re), float(im))))
    return PureState(registry, terms, n_max)
