"""Generators for the two experimental problem families.

The Green-kernel operator on [0,1] (kernel min{x(1-y), y(1-x)}, the inverse
of -d^2/dx^2 with Dirichlet boundary) has T*T eigenvalues (pi k)^{-4}; its
test functions are the hat function and the centered indicator, whose
coefficient sequences are known in closed form.  Two coefficient frames are
available (see make_green_problem): the analytic closed forms, and the
Euclidean frame of the n-point grid used by the rate experiments.  Relative
to L^2 coefficients against e_k = sqrt(2) sin(k pi x), the analytic forms
carry a constant magnitude factor (1 / (4 sqrt(2) pi) for the hat,
1 / (4 pi) for the indicator) and per-mode orientation signs, which is
immaterial for all risks since only f_k^2 enters.

A composite-midpoint discretization of the integral operator and a plain
cyclic Jacobi eigensolver are provided solely to cross-validate the
analytic spectrum; rate experiments synthesize data directly in sequence
space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import SpectralProblem

__all__ = [
    "TestFunction",
    "DenseSymmetricMatrix",
    "NumericFailure",
    "make_green_problem",
    "make_diagonal_problem",
    "discretize_integral_operator",
    "symmetric_eigenvalues",
]


class NumericFailure(RuntimeError):
    """An iterative numerical routine failed to converge."""


class TestFunction(enum.Enum):
    HAT = "hat"
    INDICATOR = "indicator"


@dataclass(frozen=True)
class DenseSymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix must be exactly symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


def make_green_problem(
    n_modes: int, truth: TestFunction, sigma: float, frame: str = "analytic"
) -> SpectralProblem:
    """Green-kernel problem truncated to n_modes coordinates.

    Eigenvalues lambda_k = (pi k)^{-4}; truth coefficients from the closed
    forms of the hat / indicator test functions (even modes vanish).

    ``frame`` selects the coefficient convention:

    * ``"analytic"``: the closed-form sequence coefficients (hat
      f_k = ((-1)^k - 1) / (4 pi^3 k^2), indicator
      f_k = (-1)^k sin(pi k / 2) / (2 pi^2 k)).
    * ``"discrete"``: coefficients taken against the Euclidean-normalized
      eigenvectors of the n_modes-point grid, i.e. sqrt(n_modes) times the
      L^2 coefficients against e_k = sqrt(2) sin(k pi x).  This is the frame
      in which adding N(0, sigma^2) noise per grid point of a discretized
      observation is equivalent to the sequence model with the same sigma;
      the rate experiments use it so that their noise levels mean what they
      would in a grid-sampled experiment.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    if frame not in ("analytic", "discrete"):
        raise ValueError(f"unknown frame: {frame!r}")
    k = np.arange(1, n_modes + 1, dtype=float)
    eigenvalues = (math.pi * k) ** -4.0
    sign = np.where(np.arange(1, n_modes + 1) % 2 == 0, 1.0, -1.0)  # (-1)^k
    if truth is TestFunction.HAT:
        if frame == "analytic":
            coeffs = (sign - 1.0) / (4.0 * math.pi**3 * k**2)
        else:
            coeffs = math.sqrt(8.0 * n_modes) * np.sin(math.pi * k / 2.0) / (math.pi**2 * k**2)
    elif truth is TestFunction.INDICATOR:
        if frame == "analytic":
            coeffs = sign * np.sin(math.pi * k / 2.0) / (2.0 * math.pi**2 * k)
        else:
            coeffs = (
                math.sqrt(2.0 * n_modes)
                * (np.cos(math.pi * k / 4.0) - np.cos(3.0 * math.pi * k / 4.0))
                / (math.pi * k)
            )
    else:
        raise ValueError(f"unknown test function: {truth!r}")
    coeffs[1::2] = 0.0  # even modes vanish exactly by symmetry
    return SpectralProblem(eigenvalues, coeffs, sigma)


def make_diagonal_problem(
    n: int, a: float, nu: float, sigma: float, seed: int
) -> SpectralProblem:
    """Diagonal problem with singular values k^{-a} and a random truth.

    truth f_k = +-k^{-nu} (1 + N(0, 0.1^2)) with independent uniform signs;
    the eigenvalues of T*T are k^{-2a}.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    k = np.arange(1, n + 1, dtype=float)
    eigenvalues = k ** (-2.0 * a)
    rng = np.random.Generator(np.random.PCG64(seed & ((1 << 64) - 1)))
    signs = rng.integers(0, 2, size=n) * 2.0 - 1.0
    perturb = 1.0 + 0.1 * rng.standard_normal(n)
    coeffs = signs * k ** (-nu) * perturb
    return SpectralProblem(eigenvalues, coeffs, sigma)


def discretize_integral_operator(n: int) -> DenseSymmetricMatrix:
    """Composite midpoint discretization (1/n) k(x_i, x_j) of the min-kernel."""
    if n < 2:
        raise ValueError("n must be at least 2")
    x = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    left = np.outer(x, 1.0 - x)  # x_i (1 - x_j)
    return DenseSymmetricMatrix(np.minimum(left, left.T) / n)


def symmetric_eigenvalues(m: DenseSymmetricMatrix, count: int) -> np.ndarray:
    """Largest ``count`` eigenvalues by cyclic Jacobi rotations, descending.

    Sweeps until the off-diagonal Frobenius mass drops below 1e-12 times the
    matrix norm; raises NumericFailure after 50 sweeps without convergence.
    Intended for desk-scale cross-validation (order up to ~512).
    """
    if count > m.order:
        raise ValueError("count exceeds matrix order")
    a = m.entries.copy()
    n = a.shape[0]
    norm = np.linalg.norm(a)
    tol = 1e-12 * norm
    if norm == 0.0:
        return np.zeros(count)
    for _ in range(50):
        off = math.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0))
        if off < tol:
            eig = np.sort(np.diag(a))[::-1]
            return eig[:count]
        # rotations below this contribute negligibly to the off-diag mass
        skip = off / (n * 10.0)
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                if abs(apq) <= skip:
                    continue
                app, aqq = a[p, p], a[q, q]
                diff = aqq - app
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # two-sided rotation in the (p, q) plane
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p].copy()
                row_q = a[q].copy()
                a[p] = c * row_p - s * row_q
                a[q] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                row_p = a[p]
    raise NumericFailure("Jacobi eigensolver did not converge within 50 sweeps")
