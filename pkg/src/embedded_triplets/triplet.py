"""Triplets of closely embedded Hilbert spaces built from a factor ``T``.

A :class:`Triplet` realizes ``(D(T); H0; R(T^*))`` for an injective factor
``T`` with ``H = T^* T``. Minus-space elements are always carried through
their H0 representatives.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    PreconditionError,
    SingularFactor,
    SingularHamiltonian,
)
from .linops import (
    DEFAULT_RANK_TOL,
    Factorization,
    Operator,
    as_operator,
    gram,
    inner,
    pinv_apply,
    svd_factorize,
)
from .spaces import DSpace, d_inner, d_norm, dual_norm, kernel_operator


@dataclass(frozen=True, eq=False)
class Triplet:
    """Model triplet for an injective factor with dense (trimmed) range.

    ``factor`` is the codomain-trimmed factor ``diag(sigma) V^*`` when the
    source has more rows than its rank, otherwise the source itself.
    """

    factor: Operator
    fact: Factorization
    source: Operator
    label: str = ""

    @property
    def dim(self) -> int:
        return self.factor.cols

    @cached_property
    def space(self) -> DSpace:
        return DSpace(self.factor, self.fact)

    @cached_property
    def hamiltonian(self) -> Operator:
        return Operator(gram(self.factor).entries, "H")

    @cached_property
    def kernel(self) -> Operator:
        return kernel_operator(self.space)

    @property
    def cond(self) -> float:
        return self.fact.cond

    def plus_norm(self, x) -> float:
        return d_norm(self.space, x)

    def plus_inner(self, x, y):
        return d_inner(self.space, x, y)

    def zero_norm(self, x) -> float:
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected a vector of length {self.dim}")
        return float(np.linalg.norm(x))

    def minus_norm(self, y) -> float:
        return dual_norm(self.space, y)


def from_factor(T, rank_tol: float = DEFAULT_RANK_TOL, label: str = "") -> Triplet:
    """Assemble ``(D(T); H0; R(T^*))`` from an injective factor ``T``."""
    src = as_operator(T, "T")
    F = svd_factorize(src, rank_tol)
    if F.num_rank < src.cols:
        raise SingularFactor(f"numerical rank {F.num_rank} < {src.cols}: T is not injective")
    if src.rows > F.num_rank:
        # trim the codomain to the closure of the range: G := Ran(T)
        trimmed = (F.right_r * F.sigma_r).conj().T
        factor = Operator(trimmed, "T")
        F = Factorization(
            left=np.eye(F.num_rank, dtype=F.left.dtype),
            sigma=F.sigma_r,
            right=F.right_r,
            rank_tol=rank_tol,
            num_rank=F.num_rank,
            shape=(F.num_rank, src.cols),
        )
    else:
        factor = src
    return Triplet(factor, F, src, label)


def from_hamiltonian(H, rank_tol: float = DEFAULT_RANK_TOL, label: str = "") -> Triplet:
    """Triplet ``(D(H^{1/2}); H0; R(H^{1/2}))`` whose Hamiltonian is ``H``."""
    H = as_operator(H, "H").entries
    if H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"Hamiltonian must be square, got {H.shape}")
    scale = max(np.linalg.norm(H, 2), np.finfo(float).tiny)
    if np.linalg.norm(H - H.conj().T, 2) > 1e-10 * scale:
        raise NotHermitian("Hamiltonian is not Hermitian within 1e-10 relative")
    lam, Q = np.linalg.eigh(0.5 * (H + H.conj().T))
    if lam[0] < -1e-10 * scale:
        raise NotPositive(f"Hamiltonian has negative eigenvalue {lam[0]:.3e}")
    if lam[0] <= rank_tol**2 * scale:
        raise SingularHamiltonian(f"Hamiltonian is singular (smallest eigenvalue {lam[0]:.3e})")
    root = (Q * np.sqrt(lam)) @ Q.conj().T
    return from_factor(0.5 * (root + root.conj().T), rank_tol, label)


def _check(tr: Triplet, v) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (tr.dim,):
        raise DimensionMismatch(f"expected a vector of length {tr.dim}, got shape {v.shape}")
    return v


def apply_h_tilde(tr: Triplet, x) -> np.ndarray:
    """Unitary ``H~ : H+ -> H-``; on coordinates it is ``x -> T^* T x``."""
    return tr.hamiltonian.entries @ _check(tr, x)


def apply_a_tilde(tr: Triplet, y) -> np.ndarray:
    """Unitary ``A~ : H- -> H+``, the inverse of ``H~``, via two pseudo-inverses."""
    y = _check(tr, y)
    return pinv_apply(tr.fact, pinv_apply(tr.fact.adjoint(), y))


def theta_pair(tr: Triplet, y, x):
    """``(Theta y)(x) = (x, A~ y)_+``: linear in ``x``, conjugate-linear in ``y``.

    On H0 representatives this is the H0 pairing ``<x, y>``. Since
    ``T A~ y = (T^*)^{-1} y`` the plus inner product ``<T x, T A~ y>`` is
    evaluated with a single pseudo-inverse, which keeps the rounding error
    linear rather than quadratic in ``cond(T)``.
    """
    x = _check(tr, x)
    y = _check(tr, y)
    return inner(tr.factor.entries @ x, pinv_apply(tr.fact.adjoint(), y))


def riesz_functional_norm(tr: Triplet, y) -> float:
    """Norm of the functional ``Theta y`` on H+, from its Riesz representer.

    Uses a QR factorization of the factor rather than its SVD: with
    ``T = Q R`` the representer ``z`` solves ``R^* R z = c`` and its H+ norm is
    ``||R^{-*} c||``.
    """
    y = _check(tr, y)
    n = tr.dim
    c = np.array([theta_pair(tr, y, e) for e in np.eye(n)]).conj()
    R = scipy.linalg.qr(tr.factor.entries, mode="r")[0][:n, :]
    w = scipy.linalg.solve_triangular(R, c, trans="C", lower=False)
    return float(np.linalg.norm(w))


def swap(tr: Triplet) -> Triplet:
    """Left-right mirror ``(H-; H0; H+)`` built on ``S = (T^*)^{-1}``."""
    S = pinv_apply(tr.fact.adjoint(), np.eye(tr.dim, dtype=tr.factor.entries.dtype))
    label = f"swap({tr.label})" if tr.label else "swap"
    return from_factor(Operator(S, "S"), tr.fact.rank_tol, label)


@dataclass
class TripletReport:
    th1: bool
    th2: bool
    th3: bool
    dual_residual: float
    h_isometry_defect: float
    a_isometry_defect: float
    inverse_defect: float
    theta_unitarity_defect: float
    theta_h0_defect: float
    domain_equality_defect: float
    cond: float
    tol: float
    samples: int
    seed: int
    passed: bool = field(default=False)

    def residuals(self) -> dict:
        return {
            k: v
            for k, v in asdict(self).items()
            if k.endswith("_defect") or k == "dual_residual"
        }

    def to_dict(self) -> dict:
        return asdict(self)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / b if b > 0 else abs(a - b)


def verify(tr: Triplet, tol: float = 1e-8, samples: int = 16, seed: int = 0) -> TripletReport:
    """Check the triplet axioms and the unitarity of ``H~``, ``A~`` and ``Theta``.

    Residuals are maxima over ``samples`` seeded random vectors. The duality
    residual compares ``||y||_-`` with ``sup |<x, y>| / ||x||_+`` evaluated at the
    maximizer ``x = A~ y`` together with every sampled ``x``, so both an
    attained value below ``||y||_-`` and a sampled ratio above it are caught.
    """
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    rng = np.random.default_rng(seed)
    n = tr.dim
    cplx = tr.factor.is_complex

    def draw():
        v = rng.standard_normal(n)
        if cplx:
            v = v + 1j * rng.standard_normal(n)
        return v

    T = tr.factor.entries
    xs = [draw() for _ in range(samples)]
    ys = [draw() for _ in range(samples)]

    dual = h_iso = a_iso = inv = th_u = th_0 = 0.0
    for x, y in zip(xs, ys):
        mn = tr.minus_norm(y)
        xa = apply_a_tilde(tr, y)
        attained = abs(inner(xa, y)) / np.linalg.norm(T @ xa)
        sampled = max(abs(inner(xx, y)) / np.linalg.norm(T @ xx) for xx in xs)
        dual = max(dual, _rel(attained, mn), max(sampled - mn, 0.0) / mn)

        px = tr.plus_norm(x)
        h_iso = max(h_iso, _rel(tr.minus_norm(apply_h_tilde(tr, x)), px))
        a_iso = max(a_iso, _rel(tr.plus_norm(xa), mn))
        back = apply_a_tilde(tr, apply_h_tilde(tr, x))
        inv = max(inv, np.linalg.norm(T @ (back - x)) / px)

        th_u = max(th_u, _rel(riesz_functional_norm(tr, y), mn))
        ref = inner(x, y)
        th_0 = max(th_0, abs(theta_pair(tr, y, x) - ref) / (np.linalg.norm(x) * np.linalg.norm(y)))

    full = tr.fact.num_rank == n
    dense = tr.factor.rows == tr.fact.num_rank
    rep = TripletReport(
        th1=bool(full and dense),
        th2=bool(full and dense),
        th3=bool(dual <= tol * max(1.0, tr.cond)),
        dual_residual=float(dual),
        h_isometry_defect=float(h_iso),
        a_isometry_defect=float(a_iso),
        inverse_defect=float(inv),
        theta_unitarity_defect=float(th_u),
        theta_h0_defect=float(th_0),
        domain_equality_defect=0.0,
        cond=float(tr.cond),
        tol=float(tol),
        samples=samples,
        seed=seed,
    )
    rep.passed = rep.th1 and rep.th2 and rep.th3 and all(
        v <= tol * max(1.0, rep.cond) for v in rep.residuals().values()
    )
    return rep


def random_factor(dim: int, cond: float, rng: np.random.Generator, rows: int | None = None) -> np.ndarray:
    """Random real factor with log-spaced singular values from 1 down to ``1/cond``."""
    rows = dim if rows is None else rows
    Q1, _ = np.linalg.qr(rng.standard_normal((rows, dim)))
    Q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    s = np.logspace(0.0, -np.log10(cond), dim) if dim > 1 else np.ones(1)
    return (Q1 * s) @ Q2.T


def condition_sweep(dim: int, conds, seed: int, samples: int = 8) -> list[dict]:
    """Verification residuals for a family of factors of growing condition number."""
    rows = []
    for cond in conds:
        rng = np.random.default_rng(seed)
        tr = from_factor(random_factor(dim, cond, rng))
        rep = verify(tr, samples=samples, seed=seed)
        rows.append({"target_cond": float(cond), **rep.residuals(), "cond": rep.cond})
    return rows
