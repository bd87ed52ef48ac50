"""Weighted L^2 triplets on finite discrete measure spaces.

``H0 = L^2(mu)``, ``H+ = L^2_omega(mu)``, ``H- = L^2_{1/omega}(mu)``. The
abstract triplet machinery works with Euclidean H0 coordinates, so functions
are passed through the unitary map ``f -> sqrt(mu) f`` before they reach
:mod:`embedded_triplets.triplet`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, PreconditionError
from .linops import Operator
from .triplet import Triplet, from_factor, theta_pair

_EXPONENT = {"plus": 1.0, "zero": 0.0, "minus": -1.0}


@dataclass(frozen=True, eq=False)
class WeightedSpace:
    mu: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, float)
        omega = np.asarray(self.omega, float)
        if mu.ndim != 1 or mu.shape != omega.shape:
            raise DimensionMismatch("mu and omega must be 1-D arrays of equal length")
        for name, v in (("mu", mu), ("omega", omega)):
            if not np.all(np.isfinite(v)) or np.any(v <= 0):
                raise PreconditionError(f"{name} must be finite and strictly positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "omega", omega)

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    def to_h0(self, f) -> np.ndarray:
        """Euclidean coordinates ``sqrt(mu) f`` of an L^2(mu) function."""
        return np.sqrt(self.mu) * self._check(f)

    def from_h0(self, phi) -> np.ndarray:
        return self._check(phi) / np.sqrt(self.mu)

    def _check(self, f) -> np.ndarray:
        f = np.asarray(f)
        if f.shape != (self.n,):
            raise DimensionMismatch(f"expected a vector of length {self.n}, got {f.shape}")
        return f


def read_weights_csv(path) -> WeightedSpace:
    """Load a measure space from CSV with columns ``point_id, mu, omega``."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    missing = {"point_id", "mu", "omega"} - set(rows[0] if rows else {})
    if not rows or missing:
        raise PreconditionError(f"weights CSV needs columns point_id, mu, omega (missing {sorted(missing)})")
    rows.sort(key=lambda r: int(r["point_id"]))
    return WeightedSpace(
        mu=np.array([float(r["mu"]) for r in rows]),
        omega=np.array([float(r["omega"]) for r in rows]),
    )


def wnorm(ws: WeightedSpace, f, which: str = "zero") -> float:
    """``(sum |f_i|^2 omega_i^s mu_i)^{1/2}`` with ``s = +1, 0, -1``."""
    try:
        s = _EXPONENT[which]
    except KeyError:
        raise PreconditionError(f"which must be one of {sorted(_EXPONENT)}, got {which!r}") from None
    f = ws._check(f)
    return float(np.sqrt(np.sum(np.abs(f) ** 2 * ws.omega**s * ws.mu)))


@dataclass(frozen=True)
class WeightedReport:
    spectrum_h: tuple
    spectrum_a: tuple
    cond: float
    hamiltonian_defect: float
    kernel_defect: float


def weighted_triplet(ws: WeightedSpace) -> tuple[Triplet, WeightedReport]:
    """Triplet ``(L^2_omega; L^2; L^2_{1/omega})`` in ``sqrt(mu)`` coordinates.

    The factor is ``diag(sqrt(omega))``; the Hamiltonian and kernel operator
    are then multiplication by ``omega`` and ``1/omega``.
    """
    root = np.sqrt(ws.omega)
    tr = from_factor(Operator(np.diag(root), "sqrt(omega)"), label="L2_omega")
    H = tr.hamiltonian.entries
    A = tr.kernel.entries
    ham_def = float(np.max(np.abs(H - np.diag(ws.omega)) / ws.omega[:, None]))
    ker_def = float(np.max(np.abs(A - np.diag(1.0 / ws.omega)) * ws.omega[:, None]))
    report = WeightedReport(
        spectrum_h=tuple(float(v) for v in np.unique(ws.omega)),
        spectrum_a=tuple(float(v) for v in np.unique(1.0 / ws.omega)),
        cond=float(root.max() / root.min()),
        hamiltonian_defect=ham_def,
        kernel_defect=ker_def,
    )
    return tr, report


def theta_weighted(ws: WeightedSpace, g, f):
    """``(Theta g)(f) = sum_i f_i conj(g_i) mu_i``."""
    g = ws._check(g)
    f = ws._check(f)
    return np.sum(f * np.conj(g) * ws.mu)


def theta_abstract(ws: WeightedSpace, tr: Triplet, g, f):
    """The same pairing computed by the abstract triplet in H0 coordinates."""
    return theta_pair(tr, ws.to_h0(g), ws.to_h0(f))
