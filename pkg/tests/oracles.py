"""Independent reference implementations used only by the tests.

``dense_*``: brute-force dense-tensor Fock algebra; transforms go through
matrix permanents rather than multinomial expansion.

``routing_*``: enumerates every way the photons of an n-pair component can
be routed through the setup, with no use of the package's state classes.
"""

import itertools
import math
from collections import defaultdict

import numpy as np


def dense_from_terms(terms, n_modes, cutoff):
    arr = np.zeros((cutoff + 1,) * n_modes, dtype=complex)
    for occ, amp in terms.items():
        arr[tuple(occ)] += amp
    return arr


def dense_to_terms(arr, atol=0.0):
    return {tuple(int(i) for i in idx): complex(arr[idx]) for idx in zip(*np.nonzero(np.abs(arr) > atol))}


def dense_creation(arr, mode):
    out = np.zeros_like(arr)
    cutoff = arr.shape[mode] - 1
    for k in range(cutoff):
        src = [slice(None)] * arr.ndim
        dst = [slice(None)] * arr.ndim
        src[mode], dst[mode] = k, k + 1
        out[tuple(dst)] = math.sqrt(k + 1) * arr[tuple(src)]
    if np.any(arr.take(cutoff, axis=mode) != 0):
        raise OverflowError("cutoff too small")
    return out


def dense_inner(lhs, rhs):
    return complex(np.vdot(lhs, rhs))


def dense_project(arr, pattern):
    """pattern: {axis: count}; returns the tensor over the remaining axes."""
    index = tuple(pattern.get(ax, slice(None)) for ax in range(arr.ndim))
    return arr[index]


def permanent(m):
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    return sum(
        math.prod(m[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n))
    )


def dense_transform(arr, matrix):
    """<m|U|n> = perm(V[rows(n), cols(m)]) / sqrt(n! m!), V = conj(matrix)."""
    v = np.conj(np.asarray(matrix))
    n_modes = arr.ndim
    out = np.zeros_like(arr)
    cutoff = arr.shape[0] - 1
    for n_idx in zip(*np.nonzero(arr)):
        amp = arr[n_idx]
        total = sum(n_idx)
        rows = [i for i, k in enumerate(n_idx) for _ in range(k)]
        for m_idx in itertools.product(range(cutoff + 1), repeat=n_modes):
            if sum(m_idx) != total:
                continue
            cols = [j for j, k in enumerate(m_idx) for _ in range(k)]
            sub = v[np.ix_(rows, cols)]
            norm = math.sqrt(
                math.prod(math.factorial(k) for k in n_idx)
                * math.prod(math.factorial(k) for k in m_idx)
            )
            out[m_idx] += amp * permanent(sub) / norm
    return out


# output modes: c_x c_y d_x d_y | e_x e_y f_x' f_y' | loss modes of the four triggers
ROUTING_MODES = 12


def _routes(photon, theta_a, theta_b, eta):
    """(mode index, amplitude) choices for one created photon."""
    ca, sa, cb, sb = math.cos(theta_a), math.sin(theta_a), math.cos(theta_b), math.sin(theta_b)
    d, l = math.sqrt(eta), math.sqrt(1 - eta)
    h = 1 / math.sqrt(2)
    if photon == "a_x":
        return [(0, ca), (4, sa * d), (8, sa * l)]
    if photon == "a_y":
        return [(1, ca), (5, sa * d), (9, sa * l)]
    if photon == "b_x":
        return [(2, cb), (6, sb * h * d), (10, sb * h * l), (7, sb * h * d), (11, sb * h * l)]
    if photon == "b_y":
        return [(3, cb), (6, sb * h * d), (10, sb * h * l), (7, -sb * h * d), (11, -sb * h * l)]
    raise KeyError(photon)


def routing_state(n, theta_a, theta_b, eta=1.0):
    """Fock amplitudes of (a_x+ b_y+ - a_y+ b_x+)^n |vac> / (n! sqrt(n+1)) after the setup."""
    poly = defaultdict(complex)
    for choice in itertools.product((0, 1), repeat=n):
        sign = (-1) ** sum(choice)
        photons = [p for c in choice for p in (("a_x", "b_y") if c == 0 else ("a_y", "b_x"))]
        for path in itertools.product(*(_routes(p, theta_a, theta_b, eta) for p in photons)):
            occ = [0] * ROUTING_MODES
            amp = sign
            for mode, a in path:
                occ[mode] += 1
                amp *= a
            poly[tuple(occ)] += amp
    scale = 1 / (math.factorial(n) * math.sqrt(n + 1))
    return {
        occ: c * scale * math.sqrt(math.prod(math.factorial(k) for k in occ))
        for occ, c in poly.items()
    }


def routing_herald(n, theta_a, theta_b, eta=1.0):
    """(probability, density matrix dict) for one photon in each trigger."""
    amps = routing_state(n, theta_a, theta_b, eta)
    by_loss = defaultdict(lambda: defaultdict(complex))
    for occ, a in amps.items():
        if occ[4:8] == (1, 1, 1, 1):
            by_loss[occ[8:]][occ[:4]] += a
    rho = defaultdict(complex)
    for branch in by_loss.values():
        for k1, a1 in branch.items():
            for k2, a2 in branch.items():
                rho[(k1, k2)] += a1 * np.conj(a2)
    p = sum(rho[(k, k)] for k in {k for k, _ in rho}).real
    return p, dict(rho)
