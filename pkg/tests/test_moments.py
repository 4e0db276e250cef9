from fractions import Fraction
from math import comb, factorial, sqrt

import numpy as np
import pytest

from channelmoments import moments as mo
from channelmoments import symmgroup as sg
from channelmoments.exactalg import mat_eq
from channelmoments.specs import (
    CHAAR,
    DEPOLARIZE,
    HAAR,
    LOCALIZED,
    EnsembleSpec,
    chaar,
    depolarize,
    haar,
)


def test_transfer_depolarize_single_unit_entry():
    for t in (1, 2, 3):
        tm = mo.transfer(depolarize(3, t))
        n = tm.matrix.shape[0]
        assert tm.matrix[0, 0] == 1
        assert sum(1 for i in range(n) for j in range(n) if tm.matrix[i, j] != 0) == 1


def test_transfer_chaar_trivial_environment_is_haar():
    for t, d in ((2, 2), (3, 4)):
        assert mat_eq(
            mo.transfer(chaar(d, 1, t)).matrix, mo.transfer(haar(d, t)).matrix
        )


def test_transfer_first_order_all_identical():
    mats = [mo.transfer(EnsembleSpec(kind, d=4, t=1, dE=3)).matrix
            for kind in (HAAR, CHAAR, DEPOLARIZE)]
    for m in mats:
        assert m.tolist() == [[1]]


def test_concatenate_projectors_are_fixed_points():
    for spec in (haar(4, 3), depolarize(4, 3)):
        tm = mo.transfer(spec)
        x = mo.gram(3, 4)
        for k in (2, 4):
            assert mat_eq(mo.concatenate(tm, x, k).matrix, tm.matrix)


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("dE", [1, 2, 8])
def test_concatenation_matches_closed_form(d, dE):
    x = mo.gram(2, d, basis=LOCALIZED)
    base = mo.transfer(chaar(d, dE, 2), basis=LOCALIZED)
    for k in range(1, 7):
        got = mo.concatenate(base, x, k)
        assert mat_eq(got.matrix, mo.exact_t2_chaar(k, d, dE).matrix)


def test_exact_t2_chaar_values():
    tm = mo.exact_t2_chaar(1, 2, 2)
    assert tm.matrix[1, 1] == Fraction(2, 15)
    assert tm.matrix[1, 0] == Fraction(1, 15)
    # trivial environment: invariant under concatenation
    for k in (1, 3, 5):
        tm = mo.exact_t2_chaar(k, 3, 1)
        assert tm.matrix[1, 0] == 0
        assert tm.matrix[1, 1] == Fraction(1, 8)
    # growing environment drives both coefficients to zero
    prev = None
    for dE in (2, 4, 8, 16):
        tm = mo.exact_t2_chaar(2, 2, dE)
        cur = (tm.matrix[1, 0], tm.matrix[1, 1])
        if prev is not None:
            assert cur[0] < prev[0] and cur[1] < prev[1]
        prev = cur


def test_norm_squared_examples():
    assert mo.norm_squared(mo.transfer(haar(4, 3)), mo.gram(3, 4)) == 6
    for t in (1, 2, 3):
        assert mo.norm_squared(mo.transfer(depolarize(5, t)), mo.gram(t, 5)) == 1
    spec = chaar(2, 2, 2)
    got = mo.norm_squared(mo.transfer(spec), mo.gram(2, 2))
    assert got == 1 + Fraction(13, 75)


def test_norm_squared_against_quadruple_sum_oracle():
    for spec, basis in ((chaar(2, 2, 2), "permutation"), (haar(3, 2), "permutation")):
        tm = mo.transfer(spec, basis=basis)
        x = mo.gram(spec.t, spec.d, basis=basis)
        assert mo.norm_squared(tm, x) == mo.norm_squared_quad(tm, x)


def test_trace_examples():
    assert mo.trace(mo.transfer(haar(4, 3)), mo.gram(3, 4)) == 6
    assert mo.trace(mo.transfer(depolarize(3, 2)), mo.gram(2, 3)) == 1
    for d, dE in ((2, 2), (3, 5)):
        got = mo.trace(mo.transfer(chaar(d, dE, 2)), mo.gram(2, d))
        assert got == 1 + Fraction(dE * (d * d - 1), d * d * dE * dE - 1)


def test_spectrum_chaar_t2_eigenvalues():
    for d, dE in ((2, 2), (3, 4), (4, 8)):
        rep = mo.spectrum(chaar(d, dE, 2))
        lam = dE * (d * d - 1) / (d * d * dE * dE - 1)
        mods = sorted(np.abs(rep.eigenvalues), reverse=True)
        assert abs(mods[0] - 1) < 1e-10
        assert abs(mods[1] - lam) < 1e-10


def test_spectrum_haar_unit_eigenvalue_count():
    for t, d in ((2, 2), (3, 4)):
        rep = mo.spectrum(haar(d, t))
        count = int(np.sum(np.abs(np.abs(rep.eigenvalues) - 1) < 1e-8))
        assert count == factorial(t)


@pytest.mark.parametrize("t", [2, 3, 4])
def test_spectrum_leading_pair_residuals(t):
    for d, dE in ((2, 2), (2, 8), (8, 2), (8, 8)):
        if d * dE < t:
            continue
        rep = mo.spectrum(chaar(d, dE, t))
        assert rep.residuals["leading_right"] < 1e-10
        assert rep.residuals["leading_left"] < 1e-10


def test_spectrum_unique_leading_eigenvalue():
    for t in (2, 3, 4):
        for d, dE in ((2, 2), (3, 2), (2, 4)):
            rep = mo.spectrum(chaar(d, dE, t))
            mods = np.sort(np.abs(rep.eigenvalues))[::-1]
            assert abs(mods[0] - 1) < 1e-8
            assert mods[1] < 1 - 1e-8


def test_leading_right_vector_exact_fixed_point():
    # tau X psi = psi over exact rationals
    for t, d, dE in ((2, 2, 2), (3, 2, 2), (3, 3, 4)):
        spec = chaar(d, dE, t)
        tm = mo.transfer(spec)
        x = mo.gram(t, d)
        psi = mo.leading_right_vector(spec, exact=True)
        out = tm.matrix.dot(x).dot(psi)
        assert all(out[i] == psi[i] for i in range(len(psi)))


def test_spectrum_depolarize_leading_pair():
    rep = mo.spectrum(depolarize(3, 3))
    mods = np.sort(np.abs(rep.eigenvalues))
    assert abs(mods[-1] - 1) < 1e-12 and mods[-2] < 1e-12
    assert rep.residuals["leading_right"] < 1e-12
    assert rep.residuals["leading_left"] < 1e-12


def test_trace_equals_eigenvalue_sum():
    for spec in (chaar(2, 2, 2), chaar(2, 2, 3), haar(4, 3)):
        rep = mo.spectrum(spec)
        tm = mo.transfer(spec, exact=False)
        x = mo.gram(spec.t, spec.d, exact=False)
        assert abs(np.sum(rep.eigenvalues).real - float(mo.trace(tm, x))) < 1e-8


def test_leading_overlap_closed_form():
    for t, d, dE in ((2, 2, 2), (3, 2, 4), (4, 3, 2)):
        got = mo.leading_overlap(chaar(d, dE, t))
        want = Fraction(
            comb(d * d * dE + t - 1, t) * factorial(t), d ** (2 * t) * dE**t
        )
        assert got == want


def test_design_distance():
    assert mo.design_distance_depolarize(depolarize(3, 2)) == 0
    for t, d in ((2, 3), (3, 4)):
        got = mo.design_distance_depolarize(haar(d, t))
        assert abs(got - sqrt(factorial(t) - 1)) < 1e-12
    dists = [mo.design_distance_depolarize(chaar(2, dE, 2)) for dE in (2, 4, 8, 16, 32)]
    assert all(a > b for a, b in zip(dists, dists[1:]))
    scaled = [dE * dist for dE, dist in zip((2, 4, 8, 16, 32), dists)]
    assert max(scaled) < 4 * scaled[-1]  # dE * eps stays bounded


def test_hierarchy_scan_small_grid():
    res = mo.hierarchy_scan([2, 3], [1, 3], [2, 3, 4], ("1", "2", "d", "d2"))
    assert not res.violations
    for row in res.rows:
        assert 1 - 1e-9 <= row.norm2 <= factorial(row.t) + 1e-9
        if row.dE == 1:
            assert abs(row.norm2 - factorial(row.t)) < 1e-9


def test_hierarchy_scan_exact_path_agrees():
    res_f = mo.hierarchy_scan([2], [1, 2], [2, 3], ("1", "2"))
    res_e = mo.hierarchy_scan([2], [1, 2], [2, 3], ("1", "2"), exact=True)
    for a, b in zip(res_f.rows, res_e.rows):
        assert abs(a.norm2 - b.norm2) < 1e-12


def test_hierarchy_scan_threads_deterministic():
    res1 = mo.hierarchy_scan([2, 3], [1, 3], [2, 3], ("1", "d"), threads=1)
    res4 = mo.hierarchy_scan([2, 3], [1, 3], [2, 3], ("1", "d"), threads=4)
    assert res1.rows == res4.rows


@pytest.mark.parametrize("t", [1, 2, 3])
def test_invariance_checks(t):
    d = max(2, t)  # the unitary-ensemble transfer needs d >= t
    results = mo.invariance_checks(
        EnsembleSpec(HAAR, d=d, t=t), EnsembleSpec(CHAAR, d=d, t=t, dE=2)
    )
    assert results
    for res in results:
        assert res.passed, f"{res.name}: {res.detail}"


def test_frame_potential_depolarize_exact():
    est = mo.frame_potential_mc(depolarize(2, 2), 200, seed=0)
    assert est.value == 1.0 and est.stderr == 0.0


def test_frame_potential_sample_floor():
    with pytest.raises(ValueError):
        mo.frame_potential_mc(haar(2, 2), 50)


def test_frame_potential_haar_and_chaar():
    est = mo.frame_potential_mc(haar(2, 2), 5000, seed=11)
    assert abs(est.value - 2.0) < 4 * est.stderr
    spec = chaar(2, 2, 2)
    exact = float(mo.norm_squared(mo.transfer(spec), mo.gram(2, 2)))
    est = mo.frame_potential_mc(spec, 5000, seed=12)
    assert abs(est.value - exact) < 4 * est.stderr


def test_frame_potential_error_bar_scaling():
    small = mo.frame_potential_mc(haar(2, 2), 2000, seed=21)
    big = mo.frame_potential_mc(haar(2, 2), 8000, seed=22)
    ratio = small.stderr / big.stderr
    assert 1.5 < ratio < 2.5


def test_haar_sampling_is_unitary():
    rng = np.random.default_rng(3)
    u = mo.sample_haar_unitary(4, rng)
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-12


def test_stinespring_kraus_complete():
    rng = np.random.default_rng(4)
    kraus = mo.sample_stinespring_kraus(3, 4, rng)
    acc = sum(k.conj().T @ k for k in kraus)
    assert np.max(np.abs(acc - np.eye(3))) < 1e-12
