"""Zero-mean Gaussian states on N modes, stored as quadrature covariance matrices.

Quadratures are ordered (x1, p1, x2, p2, ...) with x = Re(a), p = Im(a), so the
vacuum has variance 1/4 per quadrature and Wigner function
(2/pi) * exp(-2 x**2 - 2 p**2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import scipy.linalg

from .errors import InvalidArgument, NumericFailure

VACUUM_VARIANCE = 0.25

SYMMETRY_TOL = 1e-12


def symplectic_form(n: int) -> np.ndarray:
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class GaussianState:
    n_modes: int
    covariance: np.ndarray

    def __post_init__(self):
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise InvalidArgument(
                f"covariance shape {cov.shape} does not match {self.n_modes} modes"
            )
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
            raise InvalidArgument("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)

    def _cholesky(self):
        try:
            return scipy.linalg.cho_factor(self.covariance, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NumericFailure("covariance is not positive definite") from exc


@dataclass(frozen=True)
class SymplecticOp:
    matrix: np.ndarray

    def apply(self, state: GaussianState) -> GaussianState:
        s = self.matrix
        if s.shape != state.covariance.shape:
            raise InvalidArgument("operator and state dimensions differ")
        return GaussianState(state.n_modes, s @ state.covariance @ s.T)

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        return SymplecticOp(self.matrix @ other.matrix)


def vacuum_state(n: int) -> GaussianState:
    if n < 1:
        raise InvalidArgument(f"need at least one mode, got {n}")
    return GaussianState(n, VACUUM_VARIANCE * np.eye(2 * n))


def _check_mode(mode: int, n: int) -> None:
    if not 0 <= mode < n:
        raise InvalidArgument(f"mode index {mode} out of range for {n} modes")


def squeeze_mode(
    state: GaussianState,
    mode: int,
    r: float,
    axis: Literal["position", "momentum"] = "position",
) -> GaussianState:
    """Squeeze one mode along `axis` by `r` (variance along that axis scales by e^{-2r})."""
    _check_mode(mode, state.n_modes)
    if r < 0:
        raise InvalidArgument("squeezing parameter must be nonnegative")
    if axis == "position":
        diag = (math.exp(-r), math.exp(r))
    elif axis == "momentum":
        diag = (math.exp(r), math.exp(-r))
    else:
        raise InvalidArgument(f"unknown squeezing axis {axis!r}")
    s = np.eye(2 * state.n_modes)
    s[2 * mode, 2 * mode], s[2 * mode + 1, 2 * mode + 1] = diag
    return SymplecticOp(s).apply(state)


def beamsplitter(i: int, j: int, theta: float, n: int) -> SymplecticOp:
    """Phase-free beam splitter a_i -> a_i cos + a_j sin, a_j -> a_i sin - a_j cos.

    The same real 2x2 mixing acts on the x and on the p quadratures.
    """
    _check_mode(i, n)
    _check_mode(j, n)
    if i == j:
        raise InvalidArgument("beam splitter needs two distinct modes")
    c, s = math.cos(theta), math.sin(theta)
    m = np.eye(2 * n)
    for q in (0, 1):
        a, b = 2 * i + q, 2 * j + q
        m[a, a], m[a, b] = c, s
        m[b, a], m[b, b] = s, -c
    return SymplecticOp(m)


def ghz_network(n: int) -> list[tuple[int, int, float]]:
    """Beam splitters (i, j, theta) in the order they act: B_12 first, B_{n-1,n} last."""
    return [(k, k + 1, math.acos(1.0 / math.sqrt(n - k))) for k in range(n - 1)]


def build_ghz_state(n: int, r: float) -> GaussianState:
    if n < 2:
        raise InvalidArgument(f"a GHZ state needs at least two modes, got {n}")
    if r < 0:
        raise InvalidArgument("squeezing parameter must be nonnegative")
    state = squeeze_mode(vacuum_state(n), 0, r, "momentum")
    for mode in range(1, n):
        state = squeeze_mode(state, mode, r, "position")
    for i, j, theta in ghz_network(n):
        state = beamsplitter(i, j, theta, n).apply(state)
    return state


def ghz_quadratic_form(n: int, r: float) -> np.ndarray:
    """Exponent matrix M of the closed-form GHZ Wigner function W = (2/pi)^n exp(-v^T M v).

    The pair sums over (x_i - x_j)^2 run over ordered pairs.
    """
    ones = np.ones((n, n)) / n
    ep, em = math.exp(2 * r), math.exp(-2 * r)
    mxx = 2 * ep * np.eye(n) + 2 * (em - ep) * ones
    mpp = 2 * em * np.eye(n) + 2 * (ep - em) * ones
    m = np.zeros((2 * n, 2 * n))
    m[0::2, 0::2] = mxx
    m[1::2, 1::2] = mpp
    return m


def quadratic_form_of(state: GaussianState) -> np.ndarray:
    factor = state._cholesky()
    inv = scipy.linalg.cho_solve(factor, np.eye(2 * state.n_modes))
    m = 0.5 * inv
    return 0.5 * (m + m.T)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    omega = symplectic_form(state.n_modes)
    ev = np.abs(np.linalg.eigvals(1j * omega @ state.covariance))
    return np.sort(ev)[::2]


def is_symplectic(op: SymplecticOp, tol: float = 1e-12) -> bool:
    n = op.matrix.shape[0] // 2
    omega = symplectic_form(n)
    return bool(np.max(np.abs(op.matrix @ omega @ op.matrix.T - omega)) < tol)


def point_to_quadratures(point: Sequence[complex]) -> np.ndarray:
    alphas = np.asarray(point, dtype=complex)
    v = np.empty(2 * alphas.size)
    v[0::2] = alphas.real
    v[1::2] = alphas.imag
    return v


def log_wigner_at(state: GaussianState, point: Sequence[complex]) -> float:
    v = point_to_quadratures(point)
    if v.size != 2 * state.n_modes:
        raise InvalidArgument(
            f"point has {v.size // 2} modes, state has {state.n_modes}"
        )
    factor = state._cholesky()
    y = scipy.linalg.cho_solve(factor, v)
    logdet = 2.0 * np.sum(np.log(np.diag(factor[0])))
    n = state.n_modes
    return float(-0.5 * v @ y - n * math.log(2 * math.pi) - 0.5 * logdet)


def wigner_at(state: GaussianState, point: Sequence[complex]) -> float:
    """Wigner density at the phase-space point alpha_k = x_k + i p_k."""
    return math.exp(log_wigner_at(state, point))
