"""Localized permutation basis: Möbius change of basis and transport.

The character-normalized permutation operators expand as a zeta sum of
localized operators over the sub-permutation order; the inverse transform
has Möbius coefficients.  Localized operators have definite support and are
orthogonal across different supports, which block-diagonalizes the
unitary-invariant transfer matrix and block-lower-triangularizes the
Stinespring-dilated one.  All matrices here are indexed by the canonical
order of ``symmgroup.symmetric_group(t)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import log

import numpy as np

from . import symmgroup as sg
from .specs import LOCALIZED, PERMUTATION, BasisTag, EnsembleSpec, TransferMatrix


@lru_cache(maxsize=None)
def _subperm_table(t: int) -> np.ndarray:
    """Boolean matrix of the partial order: entry (i, j) iff sigma_j <= sigma_i."""
    group = sg.symmetric_group(t)
    n = len(group)
    table = np.zeros((n, n), dtype=bool)
    idx = sg.group_index(t)
    for i, sigma in enumerate(group):
        for pi in sg.enumerate_subpermutations(sigma):
            table[i, idx[pi.images]] = True
    return table


def phi_inverse(t: int) -> np.ndarray:
    """Zeta matrix of the sub-permutation order, entries 0/1."""
    table = _subperm_table(t)
    n = table.shape[0]
    out = np.full((n, n), 0, dtype=object)
    out[table] = 1
    return out


def phi_matrix(t: int) -> np.ndarray:
    """Möbius matrix: entry (sigma, pi) = mobius(inv(pi) sigma) on the order."""
    group = sg.symmetric_group(t)
    table = _subperm_table(t)
    n = len(group)
    out = np.full((n, n), 0, dtype=object)
    for i in range(n):
        for j in range(n):
            if table[i, j]:
                rel = sg.compose(sg.inverse(group[j]), group[i])
                out[i, j] = sg.mobius(rel)
    return out


def localized_gram(t: int, d: int, exact: bool = True) -> np.ndarray:
    """Normalized overlaps of the localized operators; block-diagonal in support.

    Computed as phi . R . phi^T with R(eta, kappa) =
    d^(size(eta) + size(kappa) - size(inv(eta) kappa)), which is a
    non-negative power of d by the triangle inequality of the size metric.
    """
    group = sg.symmetric_group(t)
    n = len(group)
    inverses = [sg.inverse(p) for p in group]
    if exact:
        raw = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                expo = group[i].size + group[j].size - sg.compose(inverses[i], group[j]).size
                raw[i, j] = d**expo
        phi = phi_matrix(t)
        return phi.dot(raw).dot(phi.T)
    raw = np.empty((n, n), dtype=float)
    for i in range(n):
        for j in range(n):
            expo = group[i].size + group[j].size - sg.compose(inverses[i], group[j]).size
            raw[i, j] = float(d) ** expo
    phi = np.array([[float(x) for x in row] for row in phi_matrix(t)])
    return phi @ raw @ phi.T


def _char_diag(t: int, d: int, exact: bool) -> np.ndarray:
    group = sg.symmetric_group(t)
    if exact:
        return np.array([Fraction(1, d**p.size) for p in group], dtype=object)
    return np.array([float(d) ** -p.size for p in group])


def to_localized(tm: TransferMatrix) -> TransferMatrix:
    """Transport a permutation-basis transfer matrix to the localized basis.

    With zeta the sub-permutation indicator and chi the system characters,
    the localized coefficients are zeta^T (chi tau chi) zeta: each entry
    sums the character-weighted permutation coefficients over all pairs of
    sup-permutations.
    """
    if tm.basis.kind != PERMUTATION:
        raise ValueError("input transfer matrix is not in the permutation basis")
    t, d = tm.t, tm.d
    chi = _char_diag(t, d, tm.exact)
    mid = tm.matrix * chi[:, None] * chi[None, :]
    zeta = phi_inverse(t)
    if not tm.exact:
        zeta = np.array([[float(x) for x in row] for row in zeta])
    out = zeta.T.dot(mid).dot(zeta)
    return replace(tm, matrix=out, basis=BasisTag(LOCALIZED, t, d))


def support_pattern(t: int):
    """(same_support, contains) boolean matrices over the canonical order."""
    group = sg.symmetric_group(t)
    n = len(group)
    same = np.zeros((n, n), dtype=bool)
    contains = np.zeros((n, n), dtype=bool)
    for i, p in enumerate(group):
        for j, q in enumerate(group):
            same[i, j] = p.support == q.support
            contains[i, j] = p.support >= q.support
    return same, contains


@dataclass(frozen=True)
class ExponentReport:
    """Per-entry leading 1/d exponents of a transfer matrix.

    ``exponents`` holds the rounded integer exponent where defined,
    ``structural_zero`` marks entries exactly zero at both probe dimensions,
    and ``mixed_order`` marks entries whose estimate is further than 0.1
    from an integer (or zero at only one probe dimension).
    """

    exponents: np.ndarray
    structural_zero: np.ndarray
    mixed_order: np.ndarray
    d_pair: tuple


def _resolve_dE(rule, d: int) -> int:
    if isinstance(rule, int):
        return rule
    if rule is None:
        return 1
    if rule == "d":
        return d
    if rule == "d2":
        return d * d
    if isinstance(rule, str) and rule.isdigit():
        return int(rule)
    raise ValueError(f"unknown environment-dimension rule {rule!r}")


def scaling_exponents(
    ensemble_kind: str,
    t: int,
    d_pair: tuple,
    dE_rule="d2",
    basis: str = LOCALIZED,
) -> ExponentReport:
    """Estimate per-entry power laws in 1/d from two probe dimensions.

    Entries exactly zero at both dimensions are structural zeros; nonzero
    entries get l = log(|v1|/|v2|) / log(d2/d1), flagged as mixed order when
    not within 0.1 of an integer.
    """
    from . import moments

    d1, d2 = d_pair
    if d2 <= d1:
        raise ValueError("d_pair must be increasing")
    mats = []
    for d in (d1, d2):
        spec = EnsembleSpec(ensemble_kind, d=d, t=t, dE=_resolve_dE(dE_rule, d))
        tm = moments.transfer(spec, basis=basis, exact=True)
        mats.append(tm.matrix)
    m1, m2 = mats
    n = m1.shape[0]
    expo = np.zeros((n, n), dtype=int)
    structural = np.zeros((n, n), dtype=bool)
    mixed = np.zeros((n, n), dtype=bool)
    ratio_base = log(d2 / d1)
    for i in range(n):
        for j in range(n):
            v1, v2 = m1[i, j], m2[i, j]
            if v1 == 0 and v2 == 0:
                structural[i, j] = True
                continue
            if v1 == 0 or v2 == 0:
                mixed[i, j] = True
                continue
            est = log(abs(v1) / abs(v2)) / ratio_base
            rounded = round(est)
            if abs(est - rounded) < 0.1:
                expo[i, j] = rounded
            else:
                mixed[i, j] = True
    return ExponentReport(expo, structural, mixed, (d1, d2))
