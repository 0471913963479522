import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heraldsim.errors import DuplicateMode, RegistryMismatch, TruncationExceeded
from heraldsim.fock import (
    ModeRegistry,
    PureState,
    StateEnsemble,
    apply_creation,
    inner,
    parse,
    project_pattern,
    serialize,
    vacuum,
)
from heraldsim.spdc import psi_n

import oracles

REG4 = ModeRegistry(("a_x", "a_y", "b_x", "b_y"))


@st.composite
def small_states(draw, max_modes=6, max_photons=4, min_modes=2, n_modes=None):
    if n_modes is None:
        n_modes = draw(st.integers(min_modes, max_modes))
    names = tuple(f"m{i}" for i in range(n_modes))
    n_terms = draw(st.integers(1, 5))
    terms = {}
    for _ in range(n_terms):
        occ = [0] * n_modes
        for _ in range(draw(st.integers(0, max_photons))):
            occ[draw(st.integers(0, n_modes - 1))] += 1
        re = draw(st.floats(-1, 1, allow_nan=False))
        im = draw(st.floats(-1, 1, allow_nan=False))
        terms[tuple(occ)] = complex(re, im)
    return PureState(names, terms, n_max=8)


def test_vacuum():
    v = vacuum(REG4)
    assert dict(v.terms) == {(0, 0, 0, 0): 1.0}
    assert v.norm() == 1.0
    assert dict(apply_creation(v, "a_x").terms) == {(1, 0, 0, 0): 1.0}


def test_vacuum_needs_modes():
    with pytest.raises(ValueError):
        vacuum(())


def test_creation_on_one_photon():
    s = PureState(REG4, {(1, 0, 0, 0): 1})
    assert dict(apply_creation(s, "a_x").terms) == pytest.approx({(2, 0, 0, 0): math.sqrt(2)})


def test_single_pair_creation():
    v = vacuum(REG4)
    s = apply_creation(apply_creation(v, "b_y"), "a_x") - apply_creation(apply_creation(v, "b_x"), "a_y")
    assert s.allclose(PureState(REG4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}))
    assert s.allclose(psi_n(1) * math.sqrt(2))


def test_two_pair_creation_hand_expansion():
    # (ax by - ay bx)^2 = ax^2 by^2 - 2 ax ay bx by + ay^2 bx^2, each monomial -> sqrt(prod n!)
    v = vacuum(REG4)
    s = v
    for _ in range(2):
        s = apply_creation(apply_creation(s, "b_y"), "a_x") - apply_creation(apply_creation(s, "b_x"), "a_y")
    s = s / (2 * math.sqrt(3))
    expected = PureState(REG4, {(2, 0, 0, 2): 2 / (2 * math.sqrt(3)), (1, 1, 1, 1): -2 / (2 * math.sqrt(3)), (0, 2, 2, 0): 2 / (2 * math.sqrt(3))})
    assert s.allclose(expected, atol=1e-14)
    assert s.allclose(psi_n(2), atol=1e-14)


def test_truncation_is_an_error():
    s = PureState(("a",), {(2,): 1}, n_max=2)
    with pytest.raises(TruncationExceeded):
        apply_creation(s, "a")
    with pytest.raises(TruncationExceeded):
        PureState(("a",), {(3,): 1}, n_max=2)


def test_inner_examples():
    assert inner(psi_n(2), psi_n(2)) == pytest.approx(1, abs=1e-12)
    assert inner(psi_n(2), psi_n(3)) == 0
    assert inner(vacuum(REG4), vacuum(REG4)) == 1


def test_inner_registry_mismatch():
    with pytest.raises(RegistryMismatch):
        inner(vacuum(("a", "b")), vacuum(("a", "c")))


def test_inner_is_conjugate_linear_in_lhs():
    s = PureState(("a", "b"), {(1, 0): 1, (0, 1): 1j})
    t = PureState(("a", "b"), {(1, 0): 2, (0, 1): 1})
    assert inner(s, t) == pytest.approx(2 - 1j)
    assert inner(s * 1j, t) == pytest.approx(-1j * inner(s, t))


def test_project_single_photon():
    s = PureState(REG4, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}) / math.sqrt(2)
    reduced = project_pattern(s, {"a_x": 1})
    assert reduced.registry.names == ("a_y", "b_x", "b_y")
    assert reduced.allclose(PureState(("a_y", "b_x", "b_y"), {(0, 0, 1): 1 / math.sqrt(2)}))
    assert reduced.norm_squared() == pytest.approx(0.5)


def test_project_vacuum_gives_nothing():
    assert project_pattern(vacuum(REG4), {"b_x": 1}).norm_squared() == 0


def test_project_needs_strict_subset():
    with pytest.raises(RegistryMismatch):
        project_pattern(vacuum(("a", "b")), {"a": 0, "b": 0})
    with pytest.raises(RegistryMismatch):
        project_pattern(vacuum(("a", "b")), {"z": 0})


def test_registry_rejects_duplicates():
    with pytest.raises(DuplicateMode):
        ModeRegistry(("a", "a"))


def test_states_are_immutable():
    s = vacuum(REG4)
    with pytest.raises(AttributeError):
        s.n_max = 3
    with pytest.raises(TypeError):
        s.terms[(1, 0, 0, 0)] = 1


def test_serialization_format_and_round_trip():
    s = PureState(("a", "b"), {(0, 1): -0.5j, (1, 0): 1 / 3})
    text = serialize(s)
    assert text.splitlines() == [
        "0,1 0.0000000000000000e+00 -5.0000000000000000e-01",
        "1,0 3.3333333333333331e-01 0.0000000000000000e+00",
    ]
    assert parse(text, ("a", "b")).allclose(s, atol=0)


def test_term_order_is_lexicographic():
    s = PureState(("a", "b"), {(1, 0): 1, (0, 2): 1, (0, 1): 1})
    assert [occ for occ, _ in s] == [(0, 1), (0, 2), (1, 0)]


def test_compact_prunes_only_tiny_terms():
    s = PureState(("a",), {(0,): 1, (1,): 1e-15})
    assert len(s) == 2
    assert len(s.compact()) == 1


def test_ensemble_basics():
    v = vacuum(("a", "b"))
    e = StateEnsemble.from_unnormalized([v * 0.5, apply_creation(v, "a") * 0.0])
    assert len(e) == 1 and e.trace() == pytest.approx(0.25)
    with pytest.raises(ValueError):
        StateEnsemble(((-1.0, v),))
    with pytest.raises(ValueError):
        StateEnsemble(((1.0, v * 2),))
    with pytest.raises(RegistryMismatch):
        StateEnsemble(((1.0, v), (1.0, vacuum(("a", "c")))))


@settings(max_examples=60, deadline=None)
@given(small_states(), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2), st.data())
def test_creation_linearity(s, alpha, beta, data):
    t = PureState(s.registry, {occ[::-1]: amp for occ, amp in s}, n_max=8)
    mode = data.draw(st.sampled_from(s.registry.names))
    lhs = apply_creation(s * alpha + t * beta, mode)
    rhs = apply_creation(s, mode) * alpha + apply_creation(t, mode) * beta
    assert lhs.allclose(rhs, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(small_states(), st.data())
def test_creation_commutes(s, data):
    i = data.draw(st.sampled_from(s.registry.names))
    j = data.draw(st.sampled_from(s.registry.names))
    ij = apply_creation(apply_creation(s, i), j)
    ji = apply_creation(apply_creation(s, j), i)
    assert list(ij.terms) == list(ji.terms)
    for occ, amp in ij:
        assert ji.amplitude(occ) == pytest.approx(amp, rel=1e-15, abs=0)


@settings(max_examples=60, deadline=None)
@given(small_states(min_modes=3), st.data())
def test_pattern_completeness(s, data):
    k_modes = data.draw(st.integers(1, len(s.registry) - 1))
    measured = s.registry.names[:k_modes]
    total = 0.0
    for k in range(5):
        p_k = 0.0
        for counts in np.ndindex(*(k + 1,) * k_modes):
            if sum(counts) == k:
                p_k += project_pattern(s, dict(zip(measured, counts))).norm_squared()
        direct = sum(abs(a) ** 2 for occ, a in s if sum(occ[:k_modes]) == k)
        assert p_k == pytest.approx(direct, abs=1e-10)
        total += p_k
    assert total == pytest.approx(s.norm_squared(), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sparse_matches_dense(data):
    n = data.draw(st.integers(2, 6))
    s = data.draw(small_states(max_photons=3, n_modes=n))
    t = data.draw(small_states(max_photons=4, n_modes=n))
    cutoff = 4
    ds, dt = (oracles.dense_from_terms(x.terms, n, cutoff) for x in (s, t))
    assert inner(s, t) == pytest.approx(oracles.dense_inner(ds, dt), abs=1e-12)
    mode = data.draw(st.integers(0, n - 1))
    created = oracles.dense_to_terms(oracles.dense_creation(ds, mode))
    assert apply_creation(s, mode).allclose(PureState(s.registry, created), atol=1e-12)
    axis = data.draw(st.integers(0, n - 1))
    count = data.draw(st.integers(0, 2))
    sparse = project_pattern(t, {axis: count})
    assert np.allclose(sparse.to_dense(cutoff), oracles.dense_project(dt, {axis: count}), atol=1e-12)
