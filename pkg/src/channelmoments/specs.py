"""Shared tagged descriptions: ensembles, bases, transfer matrices, circuits."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

PERMUTATION = "permutation"
LOCALIZED = "localized"

HAAR = "haar"
CHAAR = "chaar"
DEPOLARIZE = "depolarize"


@dataclass(frozen=True)
class BasisTag:
    kind: str  # PERMUTATION or LOCALIZED
    t: int
    d: int

    def __post_init__(self):
        if self.kind not in (PERMUTATION, LOCALIZED):
            raise ValueError(f"unknown basis kind {self.kind!r}")


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the reference channel ensembles at fixed dimensions.

    ``d`` is the system dimension, ``dE`` the environment dimension (only
    meaningful for the Stinespring-dilated ensemble), ``t`` the copy count
    and ``k`` the requested number of concatenations.
    """

    kind: str
    d: int
    t: int
    dE: int = 1
    k: int = 1

    def __post_init__(self):
        if self.kind not in (HAAR, CHAAR, DEPOLARIZE):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.d < 2:
            raise ValueError("system dimension must be >= 2")
        if self.dE < 1 or self.t < 1 or self.k < 1:
            raise ValueError("dE, t and k must be positive")

    @property
    def composite_dim(self) -> int:
        return self.d * self.dE

    def label(self) -> str:
        if self.kind == CHAAR:
            return f"chaar(d={self.d},dE={self.dE})"
        return f"{self.kind}(d={self.d})"


def haar(d: int, t: int, k: int = 1) -> EnsembleSpec:
    return EnsembleSpec(HAAR, d=d, t=t, k=k)


def chaar(d: int, dE: int, t: int, k: int = 1) -> EnsembleSpec:
    return EnsembleSpec(CHAAR, d=d, t=t, dE=dE, k=k)


def depolarize(d: int, t: int, k: int = 1) -> EnsembleSpec:
    return EnsembleSpec(DEPOLARIZE, d=d, t=t, k=k)


@dataclass(frozen=True)
class TransferMatrix:
    """t! x t! coefficient matrix of a moment operator in a tagged basis.

    ``matrix`` is a numpy array, either dtype=object with Fractions (exact
    path) or float64.  Rows and columns are indexed by the canonical order
    of ``symmgroup.symmetric_group(t)``.
    """

    matrix: np.ndarray
    basis: BasisTag
    ensemble: EnsembleSpec
    k: int = 1
    exact: bool = True

    @property
    def t(self) -> int:
        return self.basis.t

    @property
    def d(self) -> int:
        return self.basis.d

    def with_matrix(self, matrix: np.ndarray, k: Optional[int] = None) -> "TransferMatrix":
        return replace(self, matrix=matrix, k=self.k if k is None else k)


HEA = "hea"
MAT = "mat"

ZERO_STATE = "zero"
PLUS_STATE = "plus"

NOISE_ON_GATE_SUPPORT = "gate"
NOISE_ON_REGISTER = "register"


@dataclass(frozen=True)
class CircuitSpec:
    """Layered parametrized circuit with per-gate single-qubit noise.

    Angles are uniform on [0, 2pi); noise of strength ``gamma`` follows each
    gate on the gate's support qubits (or the whole register when
    ``noise_placement`` is "register").  ``initial_state`` defaults to the
    computational zero state for HEA and the plus state for MAT.
    """

    n: int
    ansatz: str = HEA
    layers: int = 10
    noise: Optional[str] = None  # channels.BIT_FLIP etc.; None = noiseless
    gamma: float = 0.0
    initial_state: Optional[str] = None
    noise_placement: str = NOISE_ON_GATE_SUPPORT

    def __post_init__(self):
        if self.ansatz not in (HEA, MAT):
            raise ValueError(f"unknown ansatz {self.ansatz!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.noise_placement not in (NOISE_ON_GATE_SUPPORT, NOISE_ON_REGISTER):
            raise ValueError(f"unknown noise placement {self.noise_placement!r}")

    @property
    def state(self) -> str:
        if self.initial_state is not None:
            return self.initial_state
        return ZERO_STATE if self.ansatz == HEA else PLUS_STATE

    @property
    def d(self) -> int:
        return 2**self.n
