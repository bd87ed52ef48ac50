"""The renormed spaces D(T) and R(T) and their duality norms.

``DSpace`` carries the norm ``|x|_T = ||T x||`` on vectors orthogonal to the
kernel of ``T``; ``RSpace`` carries the minimal-preimage norm on the range of
``T``. Every supremum that defines a norm variationally has a closed form
through the pseudo-inverse, and a brute-force twin (``*_oracle``) that
maximizes the same ratio over a deterministic direction grid and then
refines the best sample with a local ascent on the same ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .errors import DimensionMismatch, KernelComponent, SingularFactor
from .linops import (
    DEFAULT_RANK_TOL,
    Factorization,
    Operator,
    as_operator,
    inner,
    pinv_apply,
    svd_factorize,
)

KERNEL_TOL = 1e-10
RANGE_TOL = 1e-8


@dataclass(frozen=True)
class DSpace:
    factor: Operator
    fact: Factorization

    @classmethod
    def from_factor(cls, T, rank_tol: float = DEFAULT_RANK_TOL) -> "DSpace":
        T = as_operator(T, "T")
        return cls(T, svd_factorize(T, rank_tol))

    @property
    def dim(self) -> int:
        return self.factor.cols

    @property
    def injective(self) -> bool:
        return self.fact.num_rank == self.factor.cols


@dataclass(frozen=True)
class RSpace:
    factor: Operator
    fact: Factorization

    @classmethod
    def from_factor(cls, T, rank_tol: float = DEFAULT_RANK_TOL) -> "RSpace":
        T = as_operator(T, "T")
        return cls(T, svd_factorize(T, rank_tol))

    @property
    def dim(self) -> int:
        return self.factor.rows


@dataclass(frozen=True)
class RangeTest:
    member: bool
    norm: Optional[float] = None
    bound: Optional[float] = None


def _check_len(v, n: int) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != n:
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {v.shape}")
    return v


def _reject_kernel(fact: Factorization, x: np.ndarray) -> None:
    k = np.linalg.norm(fact.kernel_component(x))
    if k > KERNEL_TOL * np.linalg.norm(x):
        raise KernelComponent(
            f"vector has kernel component of norm {k:.3e} (relative {k / np.linalg.norm(x):.3e})"
        )


# -- D(T) -------------------------------------------------------------------


def d_norm(S: DSpace, x) -> float:
    x = _check_len(x, S.dim)
    _reject_kernel(S.fact, x)
    return float(np.linalg.norm(S.factor.entries @ x))


def d_inner(S: DSpace, x, y):
    """``(x, y)_T = <T x, T y>``, linear in ``x``."""
    x = _check_len(x, S.dim)
    y = _check_len(y, S.dim)
    _reject_kernel(S.fact, x)
    _reject_kernel(S.fact, y)
    return inner(S.factor.entries @ x, S.factor.entries @ y)


def dual_norm(S: DSpace, y) -> float:
    """Norm of ``y`` in R(T^*), i.e. ``sup |<y, x>| / |x|_T``.

    The supremum is attained and equals ``||(T^*)^+ y||``.
    """
    y = _check_len(y, S.dim)
    _reject_kernel(S.fact, y)
    return float(np.linalg.norm(pinv_apply(S.fact.adjoint(), y)))


def kernel_operator(S: DSpace) -> Operator:
    """``A = (T^* T)^{-1}`` assembled from the singular factors of ``T``."""
    if not S.injective:
        raise SingularFactor(
            f"numerical rank {S.fact.num_rank} < {S.dim}: T is not injective"
        )
    V, s = S.fact.right_r, S.fact.sigma_r
    A = (V / s**2) @ V.conj().T
    return Operator(0.5 * (A + A.conj().T), "A")


# -- R(T) -------------------------------------------------------------------


def range_test(S: RSpace, u) -> RangeTest:
    """Membership of ``u`` in the numerical range of ``T`` and its R(T) norm.

    For members the norm is the length of the minimal preimage; it is also the
    least constant ``mu`` with ``|<u, v>| <= mu ||T^* v||`` for all ``v``.
    """
    u = _check_len(u, S.dim)
    resid = np.linalg.norm(u - S.fact.range_projection(u))
    if resid > RANGE_TOL * np.linalg.norm(u):
        return RangeTest(member=False)
    norm = float(np.linalg.norm(pinv_apply(S.fact, u)))
    return RangeTest(member=True, norm=norm, bound=norm)


def r_inner(S: RSpace, u, v):
    """``<u, v>_T = <x, y>`` for the minimal preimages ``x``, ``y``."""
    for w in (u, v):
        if not range_test(S, w).member:
            raise KernelComponent("vector is not in the range of T")
    return inner(pinv_apply(S.fact, np.asarray(u)), pinv_apply(S.fact, np.asarray(v)))


def coisometry(S: RSpace, x) -> np.ndarray:
    """``U_T x``: the element ``T x`` of R(T), given in ambient coordinates."""
    x = _check_len(x, S.factor.cols)
    return S.factor.entries @ x


def r_kernel_operator(S: RSpace) -> Operator:
    """Kernel operator ``j_T j_T^*`` of R(T) closely embedded in the ambient space.

    Built from the Gram matrix of the R(T) inner product on an orthonormal
    basis of the range; it should coincide with ``T T^*``.
    """
    B = S.fact.left_r
    r = B.shape[1]
    pre = pinv_apply(S.fact, B)  # columns: minimal preimages of the basis vectors
    G = pre.conj().T @ pre
    K = B @ np.linalg.solve(G, B.conj().T) if r else np.zeros((S.dim, S.dim))
    return Operator(0.5 * (K + K.conj().T), "TT*")


# -- brute-force oracles -------------------------------------------------------


def sphere_directions(dim: int, density: int) -> np.ndarray:
    """Deterministic, roughly uniform unit vectors in ``R^dim`` (rows).

    Circle points for ``dim == 2``, a Fibonacci lattice for ``dim == 3``, and an
    unscrambled Halton sequence pushed through the Gaussian quantile function
    otherwise.
    """
    if dim == 1:
        return np.array([[1.0]])
    if dim == 2:
        t = np.pi * np.arange(density) / density  # half circle: ratio is even in v
        return np.column_stack([np.cos(t), np.sin(t)])
    if dim == 3:
        i = np.arange(density) + 0.5
        z = 1.0 - 2.0 * i / density
        rad = np.sqrt(1.0 - z**2)
        phi = np.pi * (1.0 + np.sqrt(5.0)) * i
        return np.column_stack([rad * np.cos(phi), rad * np.sin(phi), z])
    from scipy.special import ndtri

    pts = qmc.Halton(d=dim, scramble=False).random(density + 1)[1:]
    g = ndtri(pts)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _candidate_directions(n: int, complex_: bool, density: int, extra: np.ndarray) -> np.ndarray:
    if complex_:
        d = sphere_directions(2 * n, density)
        grid = d[:, :n] + 1j * d[:, n:]
    else:
        grid = sphere_directions(n, density)
    return np.vstack([grid, extra.T.astype(grid.dtype if complex_ else extra.dtype)])


def _ratio(a: np.ndarray, B: np.ndarray, V: np.ndarray) -> np.ndarray:
    num = np.abs(V.conj() @ a)
    den = np.linalg.norm(V @ B.T, axis=1)
    floor = 1e-14 * max(np.linalg.norm(B, 2), 1e-300)
    out = np.zeros_like(num)
    ok = den > floor
    out[ok] = num[ok] / den[ok]
    return out


def grid_sup(a, B, density: int, extra=None, refine: int = 200) -> float:
    """Sampled supremum of ``|<a, v>| / ||B v||`` over directions ``v``.

    The best grid direction seeds a quasi-Newton ascent with finite-difference
    gradients (at most ``refine`` iterations, ``0`` disables it). Both stages
    only ever evaluate the ratio, so the result stays a lower bound of the
    true supremum.
    """
    a = np.asarray(a)
    B = np.asarray(B)
    n = B.shape[1]
    complex_ = np.iscomplexobj(a) or np.iscomplexobj(B)
    extra = np.zeros((n, 0)) if extra is None else np.asarray(extra)
    V = _candidate_directions(n, complex_, density, extra)
    r = _ratio(a, B, V)
    best_i = int(np.argmax(r))
    best = float(r[best_i])
    if refine <= 0 or best == 0.0:
        return best

    def to_vec(p):
        return p[:n] + 1j * p[n:] if complex_ else p

    def objective(p):
        return -_ratio(a, B, to_vec(p)[None, :])[0]

    v0 = V[best_i]
    p0 = np.concatenate([v0.real, v0.imag]) if complex_ else v0.real
    res = optimize.minimize(
        objective, p0 / np.linalg.norm(p0), method="BFGS", options={"maxiter": refine, "gtol": 1e-10 * best}
    )
    return max(best, float(-res.fun))


def range_norm_oracle(S: RSpace, u, grid_density: int) -> float:
    """Brute-force ``sup |<u, v>| / ||T^* v||`` for a range member ``u``."""
    u = _check_len(u, S.dim)
    Tstar = S.factor.entries.conj().T
    return grid_sup(u, Tstar, grid_density, extra=S.fact.left)


def dual_norm_oracle(S: DSpace, y, grid_density: int) -> float:
    """Brute-force ``sup |<x, y>| / |x|_T`` over sampled directions ``x``."""
    y = _check_len(y, S.dim)
    return grid_sup(y, S.factor.entries, grid_density, extra=S.fact.right)


def plus_norm_oracle(A, x, grid_density: int) -> float:
    """``sup |<x, y>| / ||A^{1/2} y||`` for a kernel operator ``A``.

    ``A^{1/2}`` comes from the SVD of ``A``; for ``A = (T^* T)^{-1}`` the value
    should reproduce ``|x|_T``.
    """
    A = as_operator(A).entries
    U, s, Vh = np.linalg.svd(A)
    root = (U * np.sqrt(s)) @ Vh
    return grid_sup(np.asarray(x), root, grid_density, extra=U)
