"""Exact Gram and Weingarten matrices of the permutation overlap form.

The Gram matrix has entries d^(-size(inv(sigma)*pi)).  Its inverse exists
exactly when d >= t.  Because the Gram entries depend only on the cycle
type of inv(sigma)*pi, the matrix is multiplication by a central element of
the group algebra, so its inverse is again of that form: it suffices to
solve a p(t) x p(t) class-function system instead of inverting the full
t! x t! matrix.  The generic Bareiss inverse in ``exactalg`` cross-checks
this in the tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from . import symmgroup as sg
from .exactalg import SingularMatrixError, solve_exact
from .specs import PERMUTATION, BasisTag, TransferMatrix, chaar as chaar_spec, haar as haar_spec


class SingularGramError(ValueError):
    """The permutation overlaps are linearly dependent (d < t)."""


@lru_cache(maxsize=None)
def _pair_class_table(t: int) -> np.ndarray:
    """Index of the cycle type of inv(sigma_i)*sigma_j for all pairs."""
    group = sg.symmetric_group(t)
    keys = [k for k, _ in sg.conjugacy_classes(t)]
    kidx = {k: i for i, k in enumerate(keys)}
    n = len(group)
    table = np.empty((n, n), dtype=np.int64)
    inverses = [sg.inverse(p) for p in group]
    for i, pinv in enumerate(inverses):
        for j, q in enumerate(group):
            table[i, j] = kidx[sg.compose(pinv, q).cycle_type()]
    return table


def _class_size(cycle_type) -> int:
    return sum(length - 1 for length in cycle_type)


@lru_cache(maxsize=None)
def weingarten_function(t: int, d: int):
    """Class function w with sum_u d^(-|u|) w(class(inv(u) g)) = delta_{g,e}.

    Returns a dict mapping cycle type -> Fraction.  Raises SingularGramError
    when the overlap form is degenerate.
    """
    group = sg.symmetric_group(t)
    keys = [k for k, _ in sg.conjugacy_classes(t)]
    kidx = {k: i for i, k in enumerate(keys)}
    reps = {}
    for p in group:
        reps.setdefault(p.cycle_type(), p)
    n = len(keys)
    a = np.full((n, n), Fraction(0), dtype=object)
    for r, key in enumerate(keys):
        g0 = reps[key]
        for u in group:
            col = kidx[sg.compose(sg.inverse(u), g0).cycle_type()]
            a[r, col] += Fraction(1, d**u.size)
    rhs = np.array(
        [[Fraction(1) if key == (1,) * t else Fraction(0)] for key in keys],
        dtype=object,
    )
    try:
        sol = solve_exact(a, rhs)
    except SingularMatrixError as exc:
        raise SingularGramError(
            f"Gram matrix of S_{t} overlaps is singular at d={d} (need d >= t)"
        ) from exc
    return {key: sol[i, 0] for i, key in enumerate(keys)}


def gram_matrix(t: int, d: int, exact: bool = True) -> np.ndarray:
    """Normalized overlap matrix, entry (sigma, pi) = d^(-size(inv(sigma) pi))."""
    if t < 1 or d < 1:
        raise ValueError("t and d must be >= 1")
    table = _pair_class_table(t)
    keys = [k for k, _ in sg.conjugacy_classes(t)]
    if exact:
        vals = np.array([Fraction(1, d ** _class_size(k)) for k in keys], dtype=object)
        return vals[table]
    vals = np.array([float(d) ** -_class_size(k) for k in keys])
    return vals[table]


def weingarten_matrix(t: int, d: int, exact: bool = True) -> np.ndarray:
    """Exact inverse of ``gram_matrix(t, d)``.  Requires d >= t."""
    table = _pair_class_table(t)
    w = weingarten_function(t, d)
    keys = [k for k, _ in sg.conjugacy_classes(t)]
    if exact:
        vals = np.array([w[k] for k in keys], dtype=object)
    else:
        vals = np.array([float(w[k]) for k in keys])
    return vals[table]


def jucys_murphy_sum(t: int, d: int) -> Fraction:
    """Closed form for sum over S_t of d^(-size): binom(d+t-1, t) t! / d^t."""
    if t < 1 or d < 1:
        raise ValueError("t and d must be >= 1")
    return Fraction(comb(d + t - 1, t) * factorial(t), d**t)


def character_sum(t: int, d: int) -> Fraction:
    """Direct summation of d^(-size) over the group (oracle for the closed form)."""
    return sum(
        (Fraction(1, d**p.size) for p in sg.symmetric_group(t)), Fraction(0)
    )


def haar_transfer_perm(t: int, d: int, exact: bool = True) -> TransferMatrix:
    """Unitary-invariant moment operator coefficients: the Weingarten matrix."""
    return TransferMatrix(
        matrix=weingarten_matrix(t, d, exact=exact),
        basis=BasisTag(PERMUTATION, t, d),
        ensemble=haar_spec(d, t),
        k=1,
        exact=exact,
    )


def chaar_transfer_perm(t: int, d: int, dE: int, exact: bool = True) -> TransferMatrix:
    """Stinespring-dilated ensemble coefficients: dE^(-size) times the
    Weingarten matrix of the composite dimension d*dE."""
    big = weingarten_matrix(t, d * dE, exact=exact)
    group = sg.symmetric_group(t)
    if exact:
        scale = np.array([[Fraction(1, dE**p.size)] for p in group], dtype=object)
    else:
        scale = np.array([[float(dE) ** -p.size] for p in group])
    return TransferMatrix(
        matrix=scale * big,
        basis=BasisTag(PERMUTATION, t, d),
        ensemble=chaar_spec(d, dE, t),
        k=1,
        exact=exact,
    )
