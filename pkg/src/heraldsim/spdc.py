"""Polarization-entangled down-conversion source, expanded in pair number."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from .errors import NoRoot, TruncationExceeded
from .fock import DEFAULT_N_MAX, ModeRegistry, PureState, apply_creation, vacuum
from .optics import SOURCE_MODES

SOURCE_REGISTRY = ModeRegistry(SOURCE_MODES)

PAIR_PROBABILITY_MEANINGS = ("exact-one", "at-least-one")


@dataclass(frozen=True)
class SourceParams:
    r: float
    n_max: int = 3

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"interaction time r must be >= 0, got {self.r}")
        if self.n_max < 0:
            raise ValueError(f"truncation order must be >= 0, got {self.n_max}")


def pair_amplitude(r: float, n: int) -> float:
    """Amplitude ``sqrt(n+1) tanh(r)**n / cosh(r)**2`` of the n-pair component."""
    if r < 0 or n < 0:
        raise ValueError("need r >= 0 and n >= 0")
    return math.sqrt(n + 1) * math.tanh(r) ** n / math.cosh(r) ** 2


def psi_n(n: int, n_max: int = DEFAULT_N_MAX) -> PureState:
    """Normalized n-pair component on ``(a_x, a_y, b_x, b_y)``.

    ``sum_m (-1)**m |n-m, m; m, n-m> / sqrt(n+1)``.
    """
    if 2 * n > n_max:
        raise TruncationExceeded(f"{n} pairs need n_max >= {2 * n}, got {n_max}")
    amp = 1 / math.sqrt(n + 1)
    terms = {(n - m, m, m, n - m): (-1) ** m * amp for m in range(n + 1)}
    return PureState(SOURCE_REGISTRY, terms, n_max)


def psi_n_by_creation(n: int, n_max: int = DEFAULT_N_MAX) -> PureState:
    """Same component built as ``(a_x^+ b_y^+ - a_y^+ b_x^+)**n |vac> / (n! sqrt(n+1))``."""
    if 2 * n > n_max:
        raise TruncationExceeded(f"{n} pairs need n_max >= {2 * n}, got {n_max}")
    state = vacuum(SOURCE_REGISTRY, n_max)
    for _ in range(n):
        xy = apply_creation(apply_creation(state, "b_y"), "a_x")
        yx = apply_creation(apply_creation(state, "b_x"), "a_y")
        state = xy - yx
    return state / (math.factorial(n) * math.sqrt(n + 1))


def truncated_source_state(params: SourceParams, n_max: int = DEFAULT_N_MAX) -> PureState:
    """``sum_{n <= params.n_max} lambda_n |Psi_n>``; not normalized."""
    if 2 * params.n_max > n_max:
        raise TruncationExceeded(
            f"source order {params.n_max} needs n_max >= {2 * params.n_max}, got {n_max}"
        )
    state = psi_n(0, n_max) * pair_amplitude(params.r, 0)
    for n in range(1, params.n_max + 1):
        state = state + psi_n(n, n_max) * pair_amplitude(params.r, n)
    return state


def pair_probability(r: float, meaning: str = "exact-one") -> float:
    """Probability of exactly one pair (``lambda_1**2``) or of at least one (``1 - lambda_0**2``)."""
    if meaning == "exact-one":
        return pair_amplitude(r, 1) ** 2
    if meaning == "at-least-one":
        return 1.0 - pair_amplitude(r, 0) ** 2
    raise ValueError(f"unknown pair-probability meaning {meaning!r}")


def interaction_time_for(probability: float, meaning: str = "exact-one", xtol: float = 1e-12) -> float:
    """Invert :func:`pair_probability` by bisection on the branch starting at r = 0."""
    if probability == 0:
        return 0.0
    if meaning == "exact-one":
        # lambda_1**2 = 2 t**2 (1 - t**2)**2 with t = tanh r peaks at t**2 = 1/3
        hi = math.atanh(1 / math.sqrt(3))
    elif meaning == "at-least-one":
        hi = 20.0
    else:
        raise ValueError(f"unknown pair-probability meaning {meaning!r}")
    if not 0 < probability < pair_probability(hi, meaning):
        raise NoRoot(f"pair probability {probability} unreachable under {meaning!r}")
    return bisect(lambda r: pair_probability(r, meaning) - probability, 0.0, hi, xtol=xtol)
