"""Moment-operator transfer matrices: construction, concatenation, spectra.

A moment operator is represented by a t! x t! coefficient matrix tau over a
tagged basis together with the normalized Gram matrix X of that basis.  In
this pairing:

- concatenating k copies is tau (X tau)^(k-1),
- the trace is Tr[tau X],
- the squared Hilbert-Schmidt norm is Tr[tau X tau^T X],
- the spectrum equals the spectrum of the modified matrix tau X.

All identities hold in either basis, so exact rational results transport
between the permutation and localized bases unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, sqrt

import numpy as np

from . import localized as loc
from . import symmgroup as sg
from . import weingarten as wg
from .specs import (
    CHAAR,
    DEPOLARIZE,
    HAAR,
    LOCALIZED,
    PERMUTATION,
    BasisTag,
    EnsembleSpec,
    TransferMatrix,
    chaar,
    depolarize,
    haar,
)

__all__ = [
    "EnsembleSpec",
    "TransferMatrix",
    "SpectralReport",
    "transfer",
    "gram",
    "concatenate",
    "exact_t2_chaar",
    "norm_squared",
    "trace",
    "spectrum",
    "design_distance_depolarize",
    "hierarchy_scan",
    "invariance_checks",
    "frame_potential_mc",
    "haar",
    "chaar",
    "depolarize",
]


def _zero_matrix(n: int, exact: bool) -> np.ndarray:
    if exact:
        return np.full((n, n), Fraction(0), dtype=object)
    return np.zeros((n, n))


def transfer(spec: EnsembleSpec, basis: str = PERMUTATION, exact: bool = True) -> TransferMatrix:
    """Single-application (k=1) transfer matrix of a reference ensemble."""
    t, d = spec.t, spec.d
    if spec.kind == DEPOLARIZE:
        n = len(sg.symmetric_group(t))
        m = _zero_matrix(n, exact)
        m[0, 0] = Fraction(1) if exact else 1.0
        return TransferMatrix(m, BasisTag(basis, t, d), spec, k=1, exact=exact)
    if spec.kind == HAAR:
        tm = wg.haar_transfer_perm(t, d, exact=exact)
    elif spec.kind == CHAAR:
        tm = wg.chaar_transfer_perm(t, d, spec.dE, exact=exact)
    else:
        raise ValueError(f"no transfer matrix for ensemble kind {spec.kind!r}")
    if basis == LOCALIZED:
        tm = loc.to_localized(tm)
    return tm


def gram(t: int, d: int, basis: str = PERMUTATION, exact: bool = True) -> np.ndarray:
    """Normalized Gram matrix of the requested basis."""
    if basis == PERMUTATION:
        return wg.gram_matrix(t, d, exact=exact)
    if basis == LOCALIZED:
        return loc.localized_gram(t, d, exact=exact)
    raise ValueError(f"unknown basis {basis!r}")


def gram_for(tm: TransferMatrix) -> np.ndarray:
    return gram(tm.t, tm.d, basis=tm.basis.kind, exact=tm.exact)


def concatenate(tm: TransferMatrix, gram_matrix: np.ndarray, k: int) -> TransferMatrix:
    """k-fold concatenation tau (X tau)^(k-1) with X the normalized Gram."""
    if k < 1:
        raise ValueError("k must be >= 1")
    step = gram_matrix.dot(tm.matrix)
    out = tm.matrix
    for _ in range(k - 1):
        out = out.dot(step)
    return tm.with_matrix(out, k=tm.k * k)


def exact_t2_chaar(k: int, d: int, dE: int) -> TransferMatrix:
    """Closed-form k-concatenated t=2 transfer in the localized basis.

    The identity column is invariant; the transposition-to-identity entry is
    a finite geometric sum in r = dE (d^2-1) / (d^2 dE^2 - 1) and the
    transposition diagonal is r^k / (d^2 - 1).
    """
    if k < 1 or d < 2 or dE < 1:
        raise ValueError("need k >= 1, d >= 2, dE >= 1")
    den = d * d * dE * dE - 1
    r = Fraction(dE * (d * d - 1), den)
    off = Fraction(dE - 1, den) * sum((r**s for s in range(k)), Fraction(0))
    diag = Fraction(1, d * d - 1) * r**k
    m = np.array([[Fraction(1), Fraction(0)], [off, diag]], dtype=object)
    return TransferMatrix(
        m,
        BasisTag(LOCALIZED, 2, d),
        chaar(d, dE, 2, k=k),
        k=k,
        exact=True,
    )


def norm_squared(tm: TransferMatrix, gram_matrix: np.ndarray):
    """Squared Hilbert-Schmidt norm Tr[tau X tau^T X]."""
    m = tm.matrix
    return np.trace(m.dot(gram_matrix).dot(m.T).dot(gram_matrix))


def norm_squared_quad(tm: TransferMatrix, gram_matrix: np.ndarray):
    """Literal quadruple sum over basis labels; oracle for norm_squared."""
    m = tm.matrix
    n = m.shape[0]
    total = Fraction(0) if tm.exact else 0.0
    for p in range(n):
        for s in range(n):
            if m[p, s] == 0:
                continue
            for q in range(n):
                for t_ in range(n):
                    total += m[p, s] * m[q, t_] * gram_matrix[p, q] * gram_matrix[s, t_]
    return total


def trace(tm: TransferMatrix, gram_matrix: np.ndarray):
    """Trace Tr[tau X] of the represented operator."""
    return np.trace(tm.matrix.dot(gram_matrix))


@dataclass(frozen=True)
class SpectralReport:
    """Eigen-data of the modified transfer matrix tau X (float path).

    ``leading_right`` is the coefficient vector of the invariant operator,
    (d dE)^(-size(sigma)) for the dilated ensemble; ``leading_left`` is the
    identity-permutation indicator, i.e. trace preservation, and is checked
    against the dual modified matrix X tau.
    """

    eigenvalues: np.ndarray
    leading_right: np.ndarray
    leading_left: np.ndarray
    residuals: dict


def leading_right_vector(spec: EnsembleSpec, exact: bool = False) -> np.ndarray:
    """Coefficient vector of the invariant operator over the permutation basis.

    The dilated ensemble fixes the character vector (d dE)^(-size); the
    rank-one reference fixes the identity indicator (its large-dE limit).
    """
    group = sg.symmetric_group(spec.t)
    if spec.kind == DEPOLARIZE:
        out = np.zeros(len(group)) if not exact else np.array(
            [Fraction(0)] * len(group), dtype=object
        )
        out[0] = Fraction(1) if exact else 1.0
        return out
    dd = spec.d * spec.dE if spec.kind == CHAAR else spec.d
    if exact:
        return np.array([Fraction(1, dd**p.size) for p in group], dtype=object)
    return np.array([float(dd) ** -p.size for p in group])


def spectrum(spec: EnsembleSpec) -> SpectralReport:
    """Eigenvalues and leading eigenpair of the k-concatenated ensemble."""
    tm = transfer(spec, basis=PERMUTATION, exact=False)
    x = gram(spec.t, spec.d, basis=PERMUTATION, exact=False)
    if spec.k > 1:
        tm = concatenate(tm, x, spec.k)
    modified = tm.matrix @ x
    evals, evecs = np.linalg.eig(modified)
    order = np.argsort(-np.abs(evals))
    evals = evals[order]
    evecs = evecs[:, order]
    pair_residual = float(
        max(
            np.linalg.norm(modified @ evecs[:, i] - evals[i] * evecs[:, i])
            for i in range(len(evals))
        )
    )
    psi = leading_right_vector(spec)
    right_residual = float(np.linalg.norm(modified @ psi - psi, np.inf))
    e_ind = np.zeros(len(psi))
    e_ind[0] = 1.0
    dual = x @ tm.matrix
    left_residual = float(np.linalg.norm(e_ind @ dual - e_ind, np.inf))
    return SpectralReport(
        eigenvalues=evals,
        leading_right=psi / np.linalg.norm(psi),
        leading_left=e_ind,
        residuals={
            "eigenpairs": pair_residual,
            "leading_right": right_residual,
            "leading_left": left_residual,
        },
    )


def leading_overlap(spec: EnsembleSpec) -> Fraction:
    """Exact normalized overlap of the leading eigenvector with the identity.

    Equals binom(d^2 dE + t - 1, t) t! / (d^(2t) dE^t) for the dilated
    ensemble.
    """
    t, d, dE = spec.t, spec.d, spec.dE
    psi = leading_right_vector(spec, exact=True)
    g = wg.gram_matrix(t, d)
    row = g[0, :]
    return sum((row[i] * psi[i] for i in range(len(psi))), Fraction(0))


def design_distance_depolarize(spec: EnsembleSpec) -> float:
    """HS distance to the rank-one trace-preserving reference: sqrt(norm^2 - 1)."""
    tm = transfer(spec, basis=PERMUTATION, exact=False)
    x = gram(spec.t, spec.d, basis=PERMUTATION, exact=False)
    if spec.k > 1:
        tm = concatenate(tm, x, spec.k)
    n2 = float(norm_squared(tm, x))
    radicand = n2 - 1.0
    if radicand < -1e-9:
        raise ArithmeticError(f"norm^2 = {n2} below 1: inconsistent norm computation")
    return sqrt(max(radicand, 0.0))


@dataclass(frozen=True)
class ScanRow:
    t: int
    k: int
    d: int
    dE: int
    norm2: float
    trace: float
    eps_dep: float
    flags: tuple = ()


@dataclass(frozen=True)
class ScanResult:
    rows: tuple
    violations: tuple


def _scan_point(t: int, k: int, d: int, dE: int, exact: bool):
    spec = chaar(d, dE, t, k=k)
    tm = transfer(spec, basis=PERMUTATION, exact=exact)
    x = gram(t, d, basis=PERMUTATION, exact=exact)
    tk = concatenate(tm, x, k) if k > 1 else tm
    n2 = norm_squared(tk, x)
    tr = trace(tk, x)
    return spec, float(n2), float(tr)


def hierarchy_scan(
    t_list,
    k_list,
    d_list,
    dE_rules=("1", "2", "d", "d2"),
    exact: bool = False,
    threads: int = 1,
    rel_tol: float = 1e-9,
) -> ScanResult:
    """Norm and trace over a (t, k, d, dE) grid, with hierarchy checks.

    Checks recorded as violations rather than raised: norm^2 outside
    [1, t!], growth in environment dimension at fixed (t, k, d), and growth
    in concatenation count at fixed (t, d, dE).
    """
    points = []
    for t in t_list:
        for k in k_list:
            for d in d_list:
                des = sorted({loc._resolve_dE(rule, d) for rule in dE_rules})
                for dE in des:
                    if d * dE >= t:
                        points.append((t, k, d, dE))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: _scan_point(*p, exact), points))
    else:
        results = [_scan_point(*p, exact) for p in points]

    rows = []
    violations = []
    for (t, k, d, dE), (specp, n2, tr) in zip(points, results):
        flags = []
        hi = float(factorial(t))
        if not (1.0 - rel_tol <= n2 <= hi * (1 + rel_tol)):
            flags.append("bounds")
            violations.append(("bounds", (t, k, d, dE), n2))
        eps = sqrt(max(n2 - 1.0, 0.0))
        rows.append(ScanRow(t, k, d, dE, n2, tr, eps, tuple(flags)))

    by_tkd: dict = {}
    by_tddE: dict = {}
    for row in rows:
        by_tkd.setdefault((row.t, row.k, row.d), []).append(row)
        by_tddE.setdefault((row.t, row.d, row.dE), []).append(row)
    final_rows = {id(r): list(r.flags) for r in rows}
    for key, group_rows in by_tkd.items():
        group_rows.sort(key=lambda r: r.dE)
        for a, b in zip(group_rows, group_rows[1:]):
            if b.norm2 > a.norm2 * (1 + rel_tol) + rel_tol:
                violations.append(("monotone_dE", key + (a.dE, b.dE), (a.norm2, b.norm2)))
                final_rows[id(b)].append("monotone_dE")
    for key, group_rows in by_tddE.items():
        group_rows.sort(key=lambda r: r.k)
        for a, b in zip(group_rows, group_rows[1:]):
            if b.norm2 > a.norm2 * (1 + rel_tol) + rel_tol:
                violations.append(("monotone_k", key + (a.k, b.k), (a.norm2, b.norm2)))
                final_rows[id(b)].append("monotone_k")
    rows = [
        ScanRow(r.t, r.k, r.d, r.dE, r.norm2, r.trace, r.eps_dep, tuple(final_rows[id(r)]))
        for r in rows
    ]
    return ScanResult(tuple(rows), tuple(violations))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def is_unital_transfer(tm: TransferMatrix, gram_matrix: np.ndarray) -> bool:
    """Exact test that the identity operator is a fixed point."""
    v = tm.matrix.dot(gram_matrix[:, 0])
    want = [1 if i == 0 else 0 for i in range(len(v))]
    return all(v[i] == want[i] for i in range(len(v)))


def invariance_checks(spec_a: EnsembleSpec, spec_b: EnsembleSpec) -> list:
    """Exact composition identities between two ensembles and the
    rank-one reference on the shared (t, d)."""
    if (spec_a.t, spec_a.d) != (spec_b.t, spec_b.d):
        raise ValueError("specs must share (t, d)")
    t, d = spec_a.t, spec_a.d
    x = gram(t, d, basis=PERMUTATION, exact=True)
    dep = transfer(depolarize(d, t), basis=PERMUTATION, exact=True)
    ta = transfer(spec_a, basis=PERMUTATION, exact=True)
    tb = transfer(spec_b, basis=PERMUTATION, exact=True)

    def _eq(m1, m2):
        return all(
            m1[i, j] == m2[i, j] for i in range(m1.shape[0]) for j in range(m1.shape[1])
        )

    results = []
    for name, tm in (("a", ta), ("b", tb)):
        prod = dep.matrix.dot(x).dot(tm.matrix)
        results.append(
            CheckResult(
                f"depolarize_right_invariant_under_{name}",
                _eq(prod, dep.matrix),
                f"ensemble {tm.ensemble.label()}",
            )
        )
    for name, tm in (("a", ta), ("b", tb)):
        unital = is_unital_transfer(tm, x)
        prod = tm.matrix.dot(x).dot(dep.matrix)
        left_ok = _eq(prod, dep.matrix)
        results.append(
            CheckResult(
                f"depolarize_left_invariance_matches_unitality_{name}",
                left_ok == unital,
                f"unital={unital} left_invariant={left_ok}",
            )
        )
    pair = {spec_a.kind, spec_b.kind}
    if pair == {HAAR, CHAAR}:
        th = ta if spec_a.kind == HAAR else tb
        tc = tb if spec_a.kind == HAAR else ta
        left = th.matrix.dot(x).dot(tc.matrix)
        right = tc.matrix.dot(x).dot(th.matrix)
        results.append(
            CheckResult("chaar_left_invariant_under_haar", _eq(left, tc.matrix))
        )
        results.append(
            CheckResult("chaar_right_invariant_under_haar", _eq(right, tc.matrix))
        )
    for tm in (ta, tb):
        if tm.ensemble.kind == CHAAR and t > 1 and tm.ensemble.dE > 1:
            mod = tm.matrix.dot(x)
            dev = mod.dot(mod) - mod
            max_dev = max(abs(float(v)) for v in dev.flat)
            results.append(
                CheckResult(
                    "chaar_not_idempotent",
                    max_dev > 1e-6,
                    f"max deviation {max_dev:.3e}",
                )
            )
    return results


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int


def sample_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase fixing."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases[None, :]


def sample_stinespring_kraus(d: int, dE: int, rng: np.random.Generator) -> list:
    """Kraus operators of a channel from a Haar unitary on system x environment."""
    u = sample_haar_unitary(d * dE, rng)
    u4 = u.reshape(d, dE, d, dE)
    return [u4[:, j, :, 0] for j in range(dE)]


def frame_potential_mc(spec: EnsembleSpec, samples: int, seed: int = 0) -> MCEstimate:
    """Monte-Carlo estimate of the squared HS norm of the moment operator.

    Draws independent channel pairs and averages the t-th power of the
    superoperator overlap sum_{jk} |Tr[K_j^dag M_k]|^2.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    rng = np.random.default_rng(seed)
    t = spec.t
    vals = np.empty(samples)
    if spec.kind == DEPOLARIZE:
        vals[:] = 1.0
    elif spec.kind == HAAR:
        for i in range(samples):
            u = sample_haar_unitary(spec.d, rng)
            v = sample_haar_unitary(spec.d, rng)
            s = abs(np.trace(u.conj().T @ v)) ** 2
            vals[i] = s**t
    elif spec.kind == CHAAR:
        for i in range(samples):
            ka = sample_stinespring_kraus(spec.d, spec.dE, rng)
            kb = sample_stinespring_kraus(spec.d, spec.dE, rng)
            a = np.stack(ka)
            b = np.stack(kb)
            overlaps = np.einsum("aij,bij->ab", a.conj(), b)
            s = float(np.sum(np.abs(overlaps) ** 2))
            vals[i] = s**t
    else:
        raise ValueError(f"sampling not supported for {spec.kind!r}")
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / sqrt(samples)) if samples > 1 else 0.0
    return MCEstimate(mean, stderr, samples)
