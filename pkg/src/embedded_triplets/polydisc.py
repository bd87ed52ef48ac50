"""Dirichlet-type spaces on the unit polydisc, truncated to a box of multi-indices.

A function ``f(z) = sum_k a_k z^k`` is stored by its coefficients on the
index set ``{k : 0 <= k_j <= max_deg}``; the space ``D_alpha`` weights
coefficient ``k`` by ``(k+1)^alpha = prod_j (k_j+1)^alpha_j``. With
``alpha = 0`` this is the Hardy space ``H^2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import PointOutsideDisc, SpaceMismatch
from .linops import Operator
from .triplet import Triplet, from_factor


@dataclass(frozen=True, eq=False)
class PolydiscSpace:
    alpha: tuple
    max_deg: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in np.atleast_1d(self.alpha)))
        if self.max_deg < 0:
            raise SpaceMismatch(f"max_deg must be nonnegative, got {self.max_deg}")

    @property
    def N(self) -> int:
        return len(self.alpha)

    @cached_property
    def index_set(self) -> np.ndarray:
        """All multi-indices of the box, lexicographic, shape ``((max_deg+1)^N, N)``."""
        rng = range(self.max_deg + 1)
        return np.array(list(itertools.product(rng, repeat=self.N)), dtype=int)

    @property
    def size(self) -> int:
        return (self.max_deg + 1) ** self.N

    def weights(self, beta=None) -> np.ndarray:
        """``(k+1)^beta`` over the index set (``beta`` defaults to ``alpha``)."""
        beta = self.alpha if beta is None else tuple(np.atleast_1d(beta))
        if len(beta) != self.N:
            raise SpaceMismatch(f"exponent has length {len(beta)}, space has N={self.N}")
        return np.prod((self.index_set + 1.0) ** np.asarray(beta, float), axis=1)

    def position(self, k) -> int:
        """Flat position of multi-index ``k`` in the index set."""
        pos = 0
        for kj in k:
            if not 0 <= kj <= self.max_deg:
                raise SpaceMismatch(f"multi-index {tuple(k)} outside the truncation box")
            pos = pos * (self.max_deg + 1) + int(kj)
        return pos

    def monomial(self, k) -> "CoeffVector":
        a = np.zeros(self.size, dtype=complex)
        a[self.position(k)] = 1.0
        return CoeffVector(self, a)

    def zero(self) -> "CoeffVector":
        return CoeffVector(self, np.zeros(self.size, dtype=complex))


@dataclass(frozen=True, eq=False)
class CoeffVector:
    space: PolydiscSpace
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        if a.shape != (self.space.size,):
            raise SpaceMismatch(f"expected {self.space.size} coefficients, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise SpaceMismatch("coefficients must be finite")
        object.__setattr__(self, "a", a)

    def __call__(self, z) -> complex:
        """Direct evaluation ``sum_k a_k z^k``."""
        return complex(np.sum(self.a * _powers(self.space, z)))


def _same_space(sp: PolydiscSpace, f: CoeffVector) -> None:
    if f.space is not sp and (f.space.alpha, f.space.max_deg) != (sp.alpha, sp.max_deg):
        raise SpaceMismatch("coefficient vector belongs to a different space")


def _point(sp: PolydiscSpace, w) -> np.ndarray:
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if w.shape != (sp.N,):
        raise SpaceMismatch(f"point must have {sp.N} coordinates")
    if np.any(np.abs(w) >= 1.0):
        raise PointOutsideDisc(f"point {w} is not in the open unit polydisc")
    return w


def _powers(sp: PolydiscSpace, z) -> np.ndarray:
    z = _point(sp, z)
    return np.prod(z[None, :] ** sp.index_set, axis=1)


def inner_alpha(sp: PolydiscSpace, f: CoeffVector, g: CoeffVector) -> complex:
    _same_space(sp, f)
    _same_space(sp, g)
    return complex(np.sum(sp.weights() * f.a * g.a.conj()))


def dnorm_alpha(sp: PolydiscSpace, f: CoeffVector) -> float:
    _same_space(sp, f)
    return float(np.sqrt(np.sum(sp.weights() * np.abs(f.a) ** 2)))


def radial_apply(sp: PolydiscSpace, beta, f: CoeffVector) -> CoeffVector:
    """Radial derivative ``T_beta``: multiply coefficient ``k`` by ``(k+1)^beta``."""
    _same_space(sp, f)
    return CoeffVector(sp, sp.weights(beta) * f.a)


def kernel_section(sp: PolydiscSpace, w) -> CoeffVector:
    """Coefficients of ``K^alpha_w = K^alpha(w, .)``: ``(k+1)^{-alpha} conj(w)^k``."""
    w = _point(sp, w)
    return CoeffVector(sp, sp.weights(-np.asarray(sp.alpha)) * _powers(sp, w.conj()))


def kernel_eval(sp: PolydiscSpace, w, z) -> complex:
    """Truncated ``K^alpha(w, z) = sum_k (k+1)^{-alpha} conj(w)^k z^k``."""
    return kernel_section(sp, w)(z)


def hardy_kernel(w, z) -> complex:
    """Closed form ``prod_j 1 / (1 - conj(w_j) z_j)`` of the Hardy-space kernel."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return complex(np.prod(1.0 / (1.0 - w.conj() * z)))


def truncation_tail_bound(N: int, max_deg: int, w, z) -> float:
    """Bound on ``|K^0 - truncated K^0|`` for the box of degree ``max_deg``.

    With ``r = max_j |w_j z_j|`` the omitted terms sum to at most
    ``(1-r)^{-N} - ((1 - r^{d+1}) / (1-r))^N``.
    """
    r = float(np.max(np.abs(np.atleast_1d(w) * np.atleast_1d(z))))
    full = (1.0 - r) ** -N
    kept = ((1.0 - r ** (max_deg + 1)) / (1.0 - r)) ** N
    return full - kept


def reproduce(sp: PolydiscSpace, f: CoeffVector, w) -> complex:
    """``<f, K^alpha_w>_alpha``, which reproduces ``f(w)``."""
    return inner_alpha(sp, f, kernel_section(sp, w))


def kernel_gram(sp: PolydiscSpace, points) -> np.ndarray:
    """Matrix ``[K^alpha(w_i, w_j)]`` for a list of points."""
    pts = [np.atleast_1d(p) for p in points]
    return np.array([[kernel_eval(sp, wi, wj) for wj in pts] for wi in pts])


@dataclass(frozen=True)
class PolydiscReport:
    spectrum_h: tuple
    spectrum_a: tuple
    cond: float
    hamiltonian_defect: float
    kernel_defect: float


def _distinct(values: np.ndarray, rtol: float = 1e-12) -> tuple:
    v = np.sort(np.asarray(values, float))
    out = [v[0]]
    for x in v[1:]:
        if abs(x - out[-1]) > rtol * abs(x):
            out.append(x)
    return tuple(float(x) for x in out)


def polydisc_triplet(sp: PolydiscSpace) -> tuple[Triplet, PolydiscReport]:
    """The triplet ``(D_alpha; H^2; D_{-alpha})`` on the truncated coefficient space.

    The factor is the diagonal ``(k+1)^{alpha/2}``. Mixed-sign ``alpha`` is
    handled the same way; the report records how ill-conditioned it gets.
    """
    root = sp.weights(np.asarray(sp.alpha) / 2.0)
    tr = from_factor(Operator(np.diag(root), "T_alpha/2"), label=f"D_{sp.alpha}")
    w_h = sp.weights()
    w_a = sp.weights(-np.asarray(sp.alpha))
    H = tr.hamiltonian.entries
    A = tr.kernel.entries
    ham_def = float(np.max(np.abs(H - np.diag(w_h)) / w_h[:, None]))
    ker_def = float(np.max(np.abs(A - np.diag(w_a)) / w_a[:, None]))
    report = PolydiscReport(
        spectrum_h=_distinct(w_h),
        spectrum_a=_distinct(w_a),
        cond=float(root.max() / root.min()),
        hamiltonian_defect=ham_def,
        kernel_defect=ker_def,
    )
    return tr, report


def hs_diagnostic(sp: PolydiscSpace) -> np.ndarray:
    """Partial sums ``S_d = sum_{k <= d} (k+1)^{-2 alpha}`` for ``d = 0..max_deg``.

    ``S_d`` is the squared Hilbert-Schmidt norm of the kernel operator
    restricted to the box of degree ``d``; divergence signals that the
    untruncated operator is not Hilbert-Schmidt.
    """
    w = sp.weights(-2.0 * np.asarray(sp.alpha))
    top = sp.index_set.max(axis=1)
    return np.array([w[top <= d].sum() for d in range(sp.max_deg + 1)])
