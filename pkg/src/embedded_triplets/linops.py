"""Dense linear-algebra substrate.

Everything in the package is finite dimensional: a closed operator is a
matrix, possibly with an enormous condition number. This module wraps the
SVD once (:func:`svd_factorize`) and derives pseudo-inverse application,
range projections and numerical rank from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFinite, ToleranceOutOfRange

DEFAULT_RANK_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Operator:
    """A dense matrix with a free-text label (``"T"``, ``"H"``, ...).

    The scalar field is fixed by the dtype of ``entries``: real input stays
    real, complex input stays complex.
    """

    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2:
            raise DimensionMismatch(f"operator entries must be 2-D, got shape {a.shape}")
        if not np.issubdtype(a.dtype, np.complexfloating):
            a = a.astype(float)
        if not np.all(np.isfinite(a)):
            raise NonFinite(f"operator {self.label!r} has NaN or Inf entries")
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def is_complex(self) -> bool:
        return np.issubdtype(self.entries.dtype, np.complexfloating)

    def __matmul__(self, x):
        if isinstance(x, Operator):
            return Operator(self.entries @ x.entries)
        return self.entries @ np.asarray(x)


def as_operator(M, label: str = "") -> Operator:
    if isinstance(M, Operator):
        return M
    return Operator(np.asarray(M), label)


@dataclass(frozen=True)
class Factorization:
    """Thin SVD ``M = left @ diag(sigma) @ right^*`` with a rank decision.

    ``left`` and ``right`` keep all ``min(rows, cols)`` singular vectors;
    ``num_rank`` counts the singular values above ``rank_tol * sigma[0]``.
    """

    left: np.ndarray
    sigma: np.ndarray
    right: np.ndarray
    rank_tol: float
    num_rank: int
    shape: tuple = field(default=(0, 0))

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def left_r(self) -> np.ndarray:
        return self.left[:, : self.num_rank]

    @property
    def right_r(self) -> np.ndarray:
        return self.right[:, : self.num_rank]

    @property
    def sigma_r(self) -> np.ndarray:
        return self.sigma[: self.num_rank]

    @property
    def cond(self) -> float:
        """Ratio of the extreme singular values (inf when rank deficient)."""
        if self.num_rank == 0 or self.num_rank < min(self.shape):
            return float("inf")
        return float(self.sigma[0] / self.sigma[self.num_rank - 1])

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.sigma) @ self.right.conj().T

    def range_projection(self, y) -> np.ndarray:
        """Orthogonal projection onto the numerical range."""
        U = self.left_r
        return U @ (U.conj().T @ np.asarray(y))

    def kernel_component(self, x) -> np.ndarray:
        """Component of ``x`` in the numerical kernel (orthogonal complement of the co-range)."""
        x = np.asarray(x)
        V = self.right_r
        return x - V @ (V.conj().T @ x)

    def adjoint(self) -> "Factorization":
        """Factorization of ``M^*`` obtained by swapping the singular bases."""
        return Factorization(
            left=self.right,
            sigma=self.sigma,
            right=self.left,
            rank_tol=self.rank_tol,
            num_rank=self.num_rank,
            shape=(self.shape[1], self.shape[0]),
        )


def svd_factorize(M, rank_tol: float = DEFAULT_RANK_TOL) -> Factorization:
    """Thin singular value decomposition with a relative rank threshold.

    Parameters
    ----------
    M : Operator or array_like
        Matrix to factorize. Must have finite entries.
    rank_tol : float
        Relative threshold in (0, 1); ``sigma[i]`` counts towards the rank
        when ``sigma[i] > rank_tol * sigma[0]``.

    Returns
    -------
    Factorization
    """
    if not (0.0 < rank_tol < 1.0):
        raise ToleranceOutOfRange(f"rank_tol must lie in (0, 1), got {rank_tol}")
    M = as_operator(M)
    U, s, Vh = np.linalg.svd(M.entries, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > rank_tol * s[0]))
    return Factorization(
        left=_frozen(U),
        sigma=_frozen(s),
        right=_frozen(Vh.conj().T),
        rank_tol=rank_tol,
        num_rank=r,
        shape=(M.rows, M.cols),
    )


def pinv_apply(F: Factorization, y) -> np.ndarray:
    """Minimum-norm least-squares solution of ``M x = y``.

    Returns ``sum_i <y, left_i> / sigma_i * right_i`` over the numerical rank,
    so the result has no component in the numerical kernel.
    """
    y = np.asarray(y)
    if y.shape[0] != F.rows:
        raise DimensionMismatch(f"expected a vector of length {F.rows}, got {y.shape[0]}")
    coeffs = (F.left_r.conj().T @ y) / (F.sigma_r if y.ndim == 1 else F.sigma_r[:, None])
    return F.right_r @ coeffs


def adjoint(M) -> Operator:
    M = as_operator(M)
    label = f"{M.label}*" if M.label else ""
    return Operator(M.entries.conj().T, label)


def gram(T) -> Operator:
    """``T^* T``, symmetrized so the result is exactly Hermitian."""
    T = as_operator(T)
    G = T.entries.conj().T @ T.entries
    G = 0.5 * (G + G.conj().T)
    label = f"{T.label}*{T.label}" if T.label else ""
    return Operator(G, label)


def inner(x, y) -> complex | float:
    """Euclidean inner product, linear in the first slot."""
    return np.vdot(np.asarray(y), np.asarray(x))
