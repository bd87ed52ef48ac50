"""Degenerate elliptic Dirichlet problems on (0, 1) without coercivity.

The operator ``T u = b u'`` with ``u(0) = u(1) = 0`` is discretized by forward
differences: unknowns live on the ``n`` interior nodes, ``b`` and ``T u`` live
on the ``n + 1`` cell midpoints. All L^2 quantities use the midpoint rule,
i.e. a factor ``h`` in front of every Euclidean sum.

The weak problem ``a[u, v] = f(u)`` for a functional represented by ``g``
(``f(u) = <T u, g>``) is solved as the minimum-norm least-squares problem
``T v = g``. No lower bound on ``b`` is ever used.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConditionC4Missing,
    DegenerateAtNode,
    FieldMismatch,
    NoSolution,
    PreconditionError,
)
from .linops import Operator, pinv_apply, svd_factorize
from .spaces import DSpace, d_inner
from .triplet import Triplet, from_factor


@dataclass(frozen=True)
class Grid1D:
    n: int

    def __post_init__(self):
        if int(self.n) < 1:
            raise PreconditionError(f"grid needs at least one interior node, got n={self.n}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.n + 1) * self.h

    @property
    def midpoints(self) -> np.ndarray:
        return (np.arange(1, self.n + 2) - 0.5) * self.h


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Coefficient ``b`` (and optional lower bound ``c``) sampled at the midpoints."""

    grid: Grid1D
    b: np.ndarray
    c: Optional[np.ndarray] = None

    def __post_init__(self):
        m = self.grid.n + 1
        b = np.asarray(self.b, float)
        if b.shape != (m,):
            raise FieldMismatch(f"b needs {m} midpoint values, got shape {b.shape}")
        object.__setattr__(self, "b", b)
        if self.c is not None:
            c = np.asarray(self.c, float)
            if c.shape != (m,):
                raise FieldMismatch(f"c needs {m} midpoint values, got shape {c.shape}")
            object.__setattr__(self, "c", c)


def _check_field(grid: Grid1D, fld: CoefficientField) -> None:
    if fld.grid.n != grid.n:
        raise FieldMismatch(f"field lives on n={fld.grid.n}, grid has n={grid.n}")


def _check_nodes(grid: Grid1D, u) -> np.ndarray:
    u = np.asarray(u)
    if u.shape != (grid.n,):
        raise FieldMismatch(f"expected {grid.n} nodal values, got shape {u.shape}")
    return u


# -- presets and ingestion ------------------------------------------------------


def preset(name: str) -> Callable[[np.ndarray], np.ndarray]:
    """Analytic coefficient presets: ``const:V``, ``pow:P`` (``x**P``), ``linear``."""
    kind, _, arg = name.partition(":")
    if kind == "const" and arg:
        value = float(arg)
        return lambda x: np.full_like(np.asarray(x, float), value)
    if kind == "pow" and arg:
        p = float(arg)
        return lambda x: np.asarray(x, float) ** p
    if kind == "linear" and not arg:
        return lambda x: np.asarray(x, float)
    raise PreconditionError(f"unknown coefficient preset {name!r}")


SAMPLINGS = ("midpoint", "cell_average")


def sample(grid: Grid1D, fn: Callable, sampling: str = "midpoint") -> np.ndarray:
    """One value per midpoint cell: point value at the midpoint, or the cell average."""
    if sampling == "midpoint":
        return np.asarray(fn(grid.midpoints), float)
    if sampling == "cell_average":
        return cell_average(grid, fn)
    raise PreconditionError(f"sampling must be one of {SAMPLINGS}, got {sampling!r}")


def field_from_preset(
    grid: Grid1D, b: str, c: Optional[str] = "same", sampling: str = "midpoint"
) -> CoefficientField:
    """Discretize preset coefficients; ``c="same"`` takes ``c = b``."""
    bv = sample(grid, preset(b), sampling)
    if c is None:
        cv = None
    elif c == "same":
        cv = bv.copy()
    else:
        cv = sample(grid, preset(c), sampling)
    return CoefficientField(grid, bv, cv)


def read_field_csv(path) -> tuple[CoefficientField, Optional[np.ndarray]]:
    """Read ``midpoint_index, b[, c][, g]`` rows; ``n`` is inferred from the row count."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "midpoint_index" not in rows[0] or "b" not in rows[0]:
        raise PreconditionError("field CSV needs columns midpoint_index and b")
    rows.sort(key=lambda r: int(r["midpoint_index"]))
    grid = Grid1D(len(rows) - 1)
    col = lambda k: np.array([float(r[k]) for r in rows]) if rows[0].get(k) not in (None, "") else None
    return CoefficientField(grid, col("b"), col("c")), col("g")


def cell_average(grid: Grid1D, fn: Callable, order: int = 16) -> np.ndarray:
    """Average of ``fn`` over each midpoint cell ``[(i-1) h, i h]`` (Gauss-Legendre).

    This is the L^2 projection of a load representative onto cellwise
    constants.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    h = grid.h
    left = (np.arange(grid.n + 1) * h)[:, None]
    x = left + 0.5 * h * (t[None, :] + 1.0)
    return 0.5 * (np.asarray(fn(x)) @ w)


# -- conditions -------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    c1: bool
    c2: Optional[bool]
    c3: bool
    c4_integral: Optional[float]
    C: Optional[float]

    @property
    def c4(self) -> Optional[bool]:
        return None if self.c4_integral is None else bool(np.isfinite(self.c4_integral))


def check_conditions(fld: CoefficientField) -> ConditionReport:
    """Conditions (C1)-(C4) with midpoint quadrature for ``int c^{-2}``."""
    b, c, h = fld.b, fld.c, fld.grid.h
    c1 = bool(np.all(b >= 0))
    c3 = bool(np.all(np.isfinite(b)))
    if c is None:
        return ConditionReport(c1, None, c3, None, None)
    c2 = bool(np.all(c >= 0) and np.all(b >= c))
    with np.errstate(divide="ignore"):
        integral = float(h * np.sum(1.0 / c**2)) if np.all(c > 0) else float("inf")
    return ConditionReport(c1, c2, c3, integral, float(np.sqrt(integral)))


@dataclass(frozen=True)
class C4Growth:
    ns: tuple
    integrals: tuple
    diverging: bool


def c4_growth(c: str, levels) -> C4Growth:
    """Midpoint value of ``int c^{-2}`` on a sequence of grids.

    Flags divergence when the increments stop shrinking: a convergent singular
    integral has increments decaying geometrically in ``h``, a divergent one
    has increments that stay put or grow.
    """
    levels = sorted(int(n) for n in levels)
    vals = []
    for n in levels:
        g = Grid1D(n)
        vals.append(check_conditions(CoefficientField(g, preset(c)(g.midpoints), preset(c)(g.midpoints))).c4_integral)
    inc = np.diff(vals)
    diverging = bool(
        not np.all(np.isfinite(vals))
        or (len(inc) >= 2 and np.all(inc > 0) and inc[-1] >= 0.9 * inc[-2])
    )
    return C4Growth(tuple(levels), tuple(vals), diverging)


# -- operator, form, inequality --------------------------------------------------


def difference_matrix(grid: Grid1D) -> np.ndarray:
    """``(n+1) x n`` forward differences ``(v_i - v_{i-1}) / h`` with zero boundary values."""
    n = grid.n
    D = np.zeros((n + 1, n))
    idx = np.arange(n)
    D[idx, idx] = 1.0
    D[idx + 1, idx] = -1.0
    return D / grid.h


def assemble_T(grid: Grid1D, fld: CoefficientField) -> Operator:
    _check_field(grid, fld)
    return Operator(fld.b[:, None] * difference_matrix(grid), "T")


def is_injective(grid: Grid1D, fld: CoefficientField) -> bool:
    return svd_factorize(assemble_T(grid, fld)).num_rank == grid.n


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool


def verify_inequality(grid: Grid1D, fld: CoefficientField, u) -> InequalityCheck:
    """``int |u'| <= C (int |b u'|^2)^{1/2}`` with ``C = (int c^{-2})^{1/2}``."""
    _check_field(grid, fld)
    if fld.c is None:
        raise ConditionC4Missing("the inequality needs the lower bound c")
    u = _check_nodes(grid, u)
    h = grid.h
    du = difference_matrix(grid) @ u
    lhs = float(h * np.sum(np.abs(du)))
    energy = float(np.sqrt(h * np.sum(fld.b**2 * np.abs(du) ** 2)))
    C = check_conditions(fld).C
    rhs = float("inf") if not np.isfinite(C) else C * energy
    return InequalityCheck(lhs, rhs, bool(lhs <= rhs * (1.0 + 1e-10)))


def form_a(grid: Grid1D, fld: CoefficientField, u, v):
    """``a[u, v] = h sum_i b_i^2 (Du)_i conj((Dv)_i)`` (midpoint rule)."""
    _check_field(grid, fld)
    u, v = _check_nodes(grid, u), _check_nodes(grid, v)
    D = difference_matrix(grid)
    return grid.h * np.sum(fld.b**2 * (D @ u) * np.conj(D @ v))


def form_a_via_space(grid: Grid1D, fld: CoefficientField, u, v):
    """Same form through ``(u, v)_T`` of D(T) in H0 coordinates ``sqrt(h) u``."""
    S = DSpace.from_factor(assemble_T(grid, fld))
    r = np.sqrt(grid.h)
    return d_inner(S, r * np.asarray(u), r * np.asarray(v))


# -- weak solutions ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WeakSolution:
    v: np.ndarray
    residual: float
    certificate: np.ndarray
    plus_norm_of_v: float
    kernel_dim: int = 0


@dataclass(frozen=True, eq=False)
class DirichletProblem:
    """Cached factorization of ``T`` for repeated solves on one grid and field."""

    grid: Grid1D
    fld: CoefficientField
    _warned: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        _check_field(self.grid, self.fld)
        if not check_conditions(self.fld).c1:
            raise PreconditionError("condition C1 fails: b has negative values")

    @cached_property
    def T(self) -> Operator:
        return assemble_T(self.grid, self.fld)

    @cached_property
    def fact(self):
        return svd_factorize(self.T)

    @property
    def kernel_dim(self) -> int:
        return self.grid.n - self.fact.num_rank

    def dead_cells(self) -> np.ndarray:
        return np.flatnonzero(self.fld.b == 0)

    def _check_g(self, g) -> np.ndarray:
        g = np.asarray(g)
        if g.shape != (self.grid.n + 1,):
            raise FieldMismatch(f"g needs {self.grid.n + 1} midpoint values, got shape {g.shape}")
        return g

    def solve(self, g) -> WeakSolution:
        g = self._check_g(g)
        dead = self.dead_cells()
        if dead.size:
            warnings.warn(
                f"b vanishes on cells {dead.tolist()}; solving on the reduced range",
                DegenerateAtNode,
                stacklevel=3,
            )
        v = pinv_apply(self.fact, g)
        cert = self.fact.range_projection(g)
        Tv = self.T.entries @ v
        return WeakSolution(
            v=v,
            residual=float(np.linalg.norm(Tv - cert)),
            certificate=cert,
            plus_norm_of_v=float(np.sqrt(self.grid.h) * np.linalg.norm(Tv)),
            kernel_dim=self.kernel_dim,
        )

    def functional_norm(self, g) -> float:
        """``inf ||g'||`` over representatives of the same functional: ``||P_ran g||``."""
        g = self._check_g(g)
        return float(np.sqrt(self.grid.h) * np.linalg.norm(self.fact.range_projection(g)))

    def functional(self, g, u):
        """``f(u) = <T u, g>`` in the midpoint L^2 pairing."""
        u = _check_nodes(self.grid, u)
        return self.grid.h * np.sum((self.T.entries @ u) * np.conj(self._check_g(g)))

    def representative_from_load(self, load) -> np.ndarray:
        """Representative ``g`` of the nodal load ``f(u) = h sum_i u_i conj(load_i)``.

        Needs ``T^* g = load``; a load that does not vanish on the kernel of
        ``T`` is not a functional on the energy space and raises ``NoSolution``.
        """
        load = _check_nodes(self.grid, load)
        Fs = self.fact.adjoint()
        kern = self.fact.right[:, self.fact.num_rank :]
        if kern.shape[1]:
            overlap = kern.conj().T @ load
            if np.linalg.norm(overlap) > 1e-8 * max(np.linalg.norm(load), 1e-300):
                direction = kern @ overlap
                direction = direction / np.linalg.norm(direction)
                raise NoSolution(
                    "load does not vanish on the kernel of T (constant on a dead interval)",
                    direction=direction,
                )
        return pinv_apply(Fs, load)

    def triplet(self) -> Triplet:
        """Triplet of the problem in H0 coordinates ``sqrt(h) u`` (needs injective ``T``)."""
        return from_factor(self.T, label="H_a")

    def minus_representative(self, g) -> np.ndarray:
        """H0 representative (``sqrt(h)`` coordinates) of the functional given by ``g``."""
        return np.sqrt(self.grid.h) * (self.T.entries.conj().T @ self._check_g(g))


def weak_solve(grid: Grid1D, fld: CoefficientField, g) -> WeakSolution:
    """Weak solution ``v = H~^{-1} f`` for the functional represented by ``g``."""
    return DirichletProblem(grid, fld).solve(g)


def functional_norm(grid: Grid1D, fld: CoefficientField, g) -> float:
    return DirichletProblem(grid, fld).functional_norm(g)


# -- manufactured solutions and refinement -------------------------------------------

SOLUTIONS = {
    "quadratic": (lambda x: x * (1.0 - x), lambda x: 1.0 - 2.0 * x),
    "sine": (lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x)),
}


def manufactured_load(grid: Grid1D, b: str, solution: str, sampling: str = "midpoint") -> np.ndarray:
    """Discretized ``g = b v'`` for an exact solution ``v``.

    With ``sampling="midpoint"`` the ratio ``g_i / b_i`` equals ``v'(m_i)``
    exactly, so ``b`` drops out of the discrete problem; projecting both ``b``
    and ``g`` onto cell averages keeps the coefficient's influence.
    """
    try:
        _, dv = SOLUTIONS[solution]
    except KeyError:
        raise PreconditionError(f"unknown manufactured solution {solution!r}") from None
    bf = preset(b)
    return sample(grid, lambda x: bf(x) * dv(x), sampling)


@dataclass(frozen=True)
class ConvergenceStudy:
    ns: tuple
    hs: tuple
    errors: tuple
    orders: tuple
    fitted_order: float

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.errors) < 0))

    def rows(self) -> list[dict]:
        out = []
        for i, n in enumerate(self.ns):
            out.append(
                {
                    "n": n,
                    "h": self.hs[i],
                    "max_error": self.errors[i],
                    "observed_order": self.orders[i - 1] if i else float("nan"),
                }
            )
        return out


def convergence_study(b: str, solution: str, levels, sampling: str = "midpoint") -> ConvergenceStudy:
    """Max nodal error of the weak solution against ``v`` on a sequence of grids.

    ``b`` and the load are discretized with the same ``sampling`` rule. Under
    midpoint sampling the coefficient cancels (see :func:`manufactured_load`),
    so a study of how a degenerate ``b`` affects accuracy should pass
    ``sampling="cell_average"``.
    """
    exact, _ = SOLUTIONS.get(solution, (None, None))
    if exact is None:
        raise PreconditionError(f"unknown manufactured solution {solution!r}")
    ns, hs, errs = [], [], []
    for n in sorted(int(n) for n in levels):
        grid = Grid1D(n)
        fld = field_from_preset(grid, b, sampling=sampling)
        sol = weak_solve(grid, fld, manufactured_load(grid, b, solution, sampling))
        ns.append(n)
        hs.append(grid.h)
        errs.append(float(np.max(np.abs(sol.v - exact(grid.nodes)))))
    lh, le = np.log(hs), np.log(errs)
    orders = tuple(float(o) for o in np.diff(le) / np.diff(lh))
    fitted = float(np.polyfit(lh, le, 1)[0]) if len(ns) > 1 else float("nan")
    return ConvergenceStudy(tuple(ns), tuple(hs), tuple(errs), orders, fitted)
