"""Closed-form reference expressions and source-rate estimates."""

from __future__ import annotations

import math
from typing import NamedTuple

from scipy.optimize import minimize_scalar

from .optics import _check_angle, _check_efficiency
from .spdc import interaction_time_for, pair_amplitude

MAX_PROBABILITY = (2 / 9) ** 3


def p_ideal_formula(theta_a: float, theta_b: float) -> float:
    """Three-pair fourfold-coincidence probability with ideal detectors."""
    ta, tb = _check_angle(theta_a), _check_angle(theta_b)
    x = math.sin(ta) ** 2 * math.cos(ta) * math.sin(tb) ** 2 * math.cos(tb)
    return 0.5 * x * x


def p_n4_formula(theta_a: float, theta_b: float) -> float:
    """Same coincidence probability produced by the four-pair component."""
    ta, tb = _check_angle(theta_a), _check_angle(theta_b)
    return 13 / 5 * (math.sin(ta) * math.cos(ta) * math.sin(tb) * math.cos(tb)) ** 4


def p_lossy_formula(theta: float, eta: float) -> float:
    theta, eta = _check_angle(theta), _check_efficiency(eta)
    u = eta * math.sin(theta) ** 2
    return 0.5 * u**4 * (1 - u) ** 2


def f_formula(theta: float, eta: float) -> float:
    theta, eta = _check_angle(theta), _check_efficiency(eta)
    c2 = math.cos(theta) ** 2
    # 1 - eta sin^2 written so that F <= 1 survives rounding
    denom = c2 + (1 - eta) * math.sin(theta) ** 2
    if denom == 0.0:
        # eta = 1, theta = pi/2: the limit theta -> pi/2 is 1
        return 1.0
    return c2 / denom


def maximize_over_theta(objective, xatol: float = 1e-12) -> tuple[float, float]:
    """Maximize ``objective(theta)`` on ``[0, pi/2]``; returns ``(theta, value)``."""
    res = minimize_scalar(
        lambda t: -objective(t),
        bounds=(0.0, math.pi / 2),
        method="bounded",
        options={"xatol": xatol},
    )
    theta = float(res.x)
    # bounded Brent never evaluates the endpoints themselves
    candidates = [(theta, objective(theta)), (math.pi / 2, objective(math.pi / 2))]
    return max(candidates, key=lambda c: c[1])


class RateEstimate(NamedTuple):
    coincidence_probability: float
    pairs_per_second: float
    r: float


def rate_estimate(
    pair_probability: float,
    rep_rate_hz: float,
    theta: float,
    eta: float = 1.0,
    meaning: str = "exact-one",
) -> RateEstimate:
    """Heralded-pair yield from the three-pair component.

    ``r`` is chosen so the single-pair probability (under ``meaning``)
    equals ``pair_probability``; the coincidence probability per pulse is
    ``lambda_3**2 * P(theta, eta)``.
    """
    if not 0 <= pair_probability < 1:
        raise ValueError(f"pair probability must lie in [0, 1), got {pair_probability}")
    if rep_rate_hz <= 0:
        raise ValueError("repetition rate must be positive")
    r = interaction_time_for(pair_probability, meaning)
    p = pair_amplitude(r, 3) ** 2 * p_lossy_formula(theta, eta)
    return RateEstimate(p, p * rep_rate_hz, r)
