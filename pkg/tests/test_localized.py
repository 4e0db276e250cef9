from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from channelmoments import localized as loc
from channelmoments import moments as mo
from channelmoments import symmgroup as sg
from channelmoments.exactalg import identity_exact, mat_eq
from channelmoments.specs import CHAAR, DEPOLARIZE, HAAR, LOCALIZED, EnsembleSpec


def test_phi_t2():
    assert loc.phi_matrix(2).tolist() == [[1, 0], [-1, 1]]
    assert loc.phi_inverse(2).tolist() == [[1, 0], [1, 1]]


def test_phi_three_cycle_entry():
    group = sg.symmetric_group(3)
    idx = sg.group_index(3)
    phi = loc.phi_matrix(3)
    i = idx[sg.from_cycles(3, [(0, 1, 2)]).images]
    assert phi[i, 0] == 2  # mobius of a 3-cycle


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_phi_inverts_zeta(t):
    phi = loc.phi_matrix(t)
    zeta = loc.phi_inverse(t)
    n = phi.shape[0]
    assert mat_eq(phi.dot(zeta), identity_exact(n))
    assert mat_eq(zeta.dot(phi), identity_exact(n))


def test_zeta_identity_column_is_all_ones():
    zeta = loc.phi_inverse(4)
    assert all(zeta[i, 0] == 1 for i in range(24))


def test_localized_gram_transposition_block():
    for d in (2, 3, 7):
        lg = loc.localized_gram(2, d)
        assert lg[0, 0] == 1
        assert lg[0, 1] == 0 and lg[1, 0] == 0
        assert lg[1, 1] == d * d - 1
    # distinct transpositions are orthogonal
    lg3 = loc.localized_gram(3, 4)
    idx = sg.group_index(3)
    i = idx[sg.transposition(3, 0, 1).images]
    j = idx[sg.transposition(3, 0, 2).images]
    assert lg3[i, i] == 15 and lg3[i, j] == 0


@pytest.mark.parametrize("t,d", [(2, 8), (3, 8), (4, 8), (4, 16), (5, 8)])
def test_localized_gram_orthogonal_by_support(t, d):
    lg = loc.localized_gram(t, d)
    same, _ = loc.support_pattern(t)
    n = lg.shape[0]
    for i in range(n):
        for j in range(n):
            if not same[i, j]:
                assert lg[i, j] == 0


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
def test_block_size_identity(t):
    # t! = sum over localities l != 1 of binom(t, l) * derangements(l)
    total = sum(
        comb(t, l) * sg.derangement_count(l) for l in range(t + 1) if l != 1
    )
    assert total == factorial(t)
    # and the support multiset of the group matches the block sizes
    by_support = {}
    for p in sg.symmetric_group(t):
        by_support[p.support] = by_support.get(p.support, 0) + 1
    for supp, count in by_support.items():
        assert count == sg.derangement_count(len(supp))


def test_haar_localized_identity_column_and_transpositions():
    for t, d in ((2, 5), (3, 3), (4, 4)):
        tm = mo.transfer(EnsembleSpec(HAAR, d=d, t=t), basis=LOCALIZED)
        group = sg.symmetric_group(t)
        # identity column: delta at the identity
        for i in range(len(group)):
            assert tm.matrix[i, 0] == (1 if i == 0 else 0)
        idx = sg.group_index(t)
        taus = [p for p in group if p.size == 1]
        for a in taus:
            for b in taus:
                i, j = idx[a.images], idx[b.images]
                want = Fraction(1, d * d - 1) if a == b else 0
                assert tm.matrix[i, j] == want


@pytest.mark.parametrize("t,d", [(2, 3), (3, 3), (4, 4)])
def test_haar_localized_block_diagonal(t, d):
    tm = mo.transfer(EnsembleSpec(HAAR, d=d, t=t), basis=LOCALIZED)
    same, _ = loc.support_pattern(t)
    n = tm.matrix.shape[0]
    for i in range(n):
        for j in range(n):
            if not same[i, j]:
                assert tm.matrix[i, j] == 0


@pytest.mark.parametrize("t,d,dE", [(2, 2, 2), (3, 2, 2), (4, 2, 2), (4, 2, 4)])
def test_chaar_localized_block_lower_triangular(t, d, dE):
    tm = mo.transfer(EnsembleSpec(CHAAR, d=d, t=t, dE=dE), basis=LOCALIZED)
    _, contains = loc.support_pattern(t)
    n = tm.matrix.shape[0]
    for i in range(n):
        for j in range(n):
            if not contains[i, j]:
                assert tm.matrix[i, j] == 0


def test_chaar_localized_closed_forms_at_t3():
    # transposition coefficients are locality-2 quantities at any order
    d, dE = 2, 3
    den = d * d * dE * dE - 1
    tm = mo.transfer(EnsembleSpec(CHAAR, d=d, t=3, dE=dE), basis=LOCALIZED)
    idx = sg.group_index(3)
    taus = [p for p in sg.symmetric_group(3) if p.size == 1]
    for a in taus:
        i = idx[a.images]
        assert tm.matrix[i, 0] == Fraction(dE - 1, den)
        for b in taus:
            j = idx[b.images]
            want = Fraction(dE, den) if a == b else 0
            assert tm.matrix[i, j] == want
        assert tm.matrix[0, i] == 0


def test_haar_localized_idempotent_under_concatenation():
    for t, d in ((2, 4), (3, 3), (4, 4)):
        tm = mo.transfer(EnsembleSpec(HAAR, d=d, t=t), basis=LOCALIZED)
        x = mo.gram(t, d, basis=LOCALIZED)
        for k in (2, 3):
            conc = mo.concatenate(tm, x, k)
            assert mat_eq(conc.matrix, tm.matrix)


@pytest.mark.parametrize("t", [2, 3])
def test_norm_invariant_under_basis_transport(t):
    d, dE = 2, 2
    spec = EnsembleSpec(CHAAR, d=d, t=t, dE=dE)
    tm_p = mo.transfer(spec)
    tm_l = mo.transfer(spec, basis=LOCALIZED)
    n_p = mo.norm_squared(tm_p, mo.gram(t, d))
    n_l = mo.norm_squared(tm_l, mo.gram(t, d, basis=LOCALIZED))
    assert n_p == n_l


def test_depolarize_localized_single_entry():
    tm = mo.transfer(EnsembleSpec(DEPOLARIZE, d=3, t=3), basis=LOCALIZED)
    n = tm.matrix.shape[0]
    for i in range(n):
        for j in range(n):
            assert tm.matrix[i, j] == (1 if i == j == 0 else 0)


def test_scaling_exponents_haar():
    rep = loc.scaling_exponents(HAAR, 2, (8, 16), dE_rule="1")
    # transposition diagonal decays as 1/(d^2 - 1)
    assert rep.exponents[1, 1] == 2
    assert rep.structural_zero[0, 1] and rep.structural_zero[1, 0]
    assert not rep.mixed_order.any()


def test_scaling_exponents_chaar_lebesgue():
    rep = loc.scaling_exponents(CHAAR, 2, (8, 16), dE_rule="d2")
    assert rep.exponents[1, 0] == 4  # (dE-1)/(d^2 dE^2 - 1) with dE = d^2
    assert rep.exponents[1, 1] == 4
    assert rep.structural_zero[0, 1]
    assert not rep.mixed_order.any()


def test_to_localized_requires_permutation_basis():
    tm = mo.transfer(EnsembleSpec(HAAR, d=3, t=2), basis=LOCALIZED)
    with pytest.raises(ValueError):
        loc.to_localized(tm)
