"""Parametrized two-step complex of a q-commuting pair and its homology.

At a character ``gamma`` on one of the two axes the maps

    d0 = [ gamma_y I - q S ]          d1 = [ T - gamma_x I , S - gamma_y I ]
         [ T - q gamma_x I ]

form a complex ``X -> X (+) X -> X`` (written as a 2N x N and an
N x 2N matrix).  For any q-commuting pair the composite collapses to a
scalar: ``d1 d0 = (q - 1) gamma_x gamma_y I``, which vanishes exactly
on the axes -- homology is therefore only defined there, and off-axis
requests are a hard error rather than a silent zero.

Ranks come from singular values with a relative threshold; a rank jump
is exactly what joint-spectrum membership means, so near-threshold
singular values flag the answer as unstable instead of being hidden.

Scan results describe the *truncated* pair.  No claim is made that they
converge to the spectrum of the untruncated model (the truncated shift
is nilpotent; the full one is not), so CSV output labels them as the
truncation spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import PreconditionError
from .opcalc import OperatorPair

__all__ = [
    "KoszulComplexAt",
    "build",
    "composite_defect",
    "Homology",
    "homology_dims",
    "GridSpec",
    "ScanRow",
    "spectrum_scan",
    "DEFAULT_RANK_TOL",
]

DEFAULT_RANK_TOL = 1e-10

# Invariant tolerance for the composite identity at build time.
_BUILD_TOL = 1e-12


@dataclass(frozen=True)
class KoszulComplexAt:
    """The two differentials of the complex at a fixed character."""

    gamma: tuple[complex, complex]
    d0: np.ndarray
    d1: np.ndarray
    n: int


def build(pair: OperatorPair, gamma: tuple[complex, complex]) -> KoszulComplexAt:
    """Assemble the differentials at ``gamma`` and verify the composite.

    ``d1 @ d0`` must equal ``(q-1) gamma_x gamma_y I`` up to
    ``1e-12 * (||T|| + ||S|| + |gamma|)^2``; a violation means the pair
    does not satisfy the commutation relation to working precision.
    """
    gx, gy = complex(gamma[0]), complex(gamma[1])
    n = pair.n
    eye = np.eye(n, dtype=np.complex128)
    d0 = np.vstack([gy * eye - pair.q * pair.s, pair.t - pair.q * gx * eye])
    d1 = np.hstack([pair.t - gx * eye, pair.s - gy * eye])
    comp = KoszulComplexAt((gx, gy), d0, d1, n)
    scale = _defect_scale(pair, (gx, gy))
    defect = composite_defect(comp, pair.q)
    if defect > _BUILD_TOL * scale:
        raise PreconditionError(
            f"composite identity violated: defect {defect:.3e} "
            f"exceeds {_BUILD_TOL:.0e} * {scale:.3e}"
        )
    return comp


def _defect_scale(pair: OperatorPair, gamma: tuple[complex, complex]) -> float:
    g = abs(gamma[0]) + abs(gamma[1])
    return float(
        (np.linalg.norm(pair.t, 2) + np.linalg.norm(pair.s, 2) + g) ** 2
    )


def composite_defect(comp: KoszulComplexAt, q: complex) -> float:
    """Frobenius distance of ``d1 d0`` from its scalar value.

    Returns ``|| d1 d0 - (q-1) gamma_x gamma_y I ||_F``; in particular
    ``d1 d0`` itself vanishes (within tolerance) exactly when ``gamma``
    lies on an axis.
    """
    gx, gy = comp.gamma
    target = (complex(q) - 1.0) * gx * gy * np.eye(comp.n, dtype=np.complex128)
    return float(np.linalg.norm(comp.d1 @ comp.d0 - target))


class Homology(NamedTuple):
    h0: int
    h1: int
    h2: int
    stable: bool

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)

    @property
    def member(self) -> bool:
        return self.h0 > 0 or self.h1 > 0 or self.h2 > 0


def _rank_with_stability(m: np.ndarray, rank_tol: float) -> tuple[int, bool]:
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0, True
    threshold = rank_tol * sv[0]
    rank = int(np.count_nonzero(sv > threshold))
    near = np.any((sv > threshold / 10.0) & (sv < threshold * 10.0))
    return rank, not bool(near)


def homology_dims(
    comp: KoszulComplexAt, rank_tol: float = DEFAULT_RANK_TOL
) -> Homology:
    """Numerical homology of the complex at an axis character.

    ``h0 = dim ker d0``, ``h2 = codim im d1`` and
    ``h1 = dim ker d1 - rank d0`` via SVD ranks with relative threshold
    ``rank_tol``.  Exactness of the middle square on the axes makes
    ``h1 >= 0``; a negative raw value can only come from rank
    misestimates and is clamped with ``stable = False``.
    """
    gx, gy = comp.gamma
    if gx != 0 and gy != 0:
        raise PreconditionError(
            f"gamma = ({gx}, {gy}) is off both axes; the composite does not "
            "vanish there and homology is undefined"
        )
    if not rank_tol > 0:
        raise PreconditionError(f"rank_tol must be positive, got {rank_tol}")
    r0, stable0 = _rank_with_stability(comp.d0, rank_tol)
    r1, stable1 = _rank_with_stability(comp.d1, rank_tol)
    n = comp.n
    h0 = n - r0
    h1 = (2 * n - r1) - r0
    h2 = n - r1
    stable = stable0 and stable1
    if h1 < 0:
        h1 = 0
        stable = False
    return Homology(h0, h1, h2, stable)


# ---------------------------------------------------------------------------
# axis scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in one axis coordinate.

    ``steps`` points span each of the real and imaginary ranges
    (a degenerate range contributes a single point); ``steps = 0``
    gives the empty grid.
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    steps: int

    def points(self) -> list[complex]:
        if self.steps <= 0:
            return []
        res = (
            np.linspace(self.re_min, self.re_max, self.steps)
            if self.re_max > self.re_min
            else np.asarray([self.re_min])
        )
        ims = (
            np.linspace(self.im_min, self.im_max, self.steps)
            if self.im_max > self.im_min
            else np.asarray([self.im_min])
        )
        return [complex(r, i) for r in res for i in ims]


@dataclass(frozen=True)
class ScanRow:
    g_re: float
    g_im: float
    axis: str
    h0: int
    h1: int
    h2: int
    member: bool
    stable: bool
    error: str = ""


def spectrum_scan(
    pair: OperatorPair,
    axis: Literal["x", "y"],
    grid: GridSpec,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> list[ScanRow]:
    """Sweep one axis and report homology at every grid character.

    Membership (any nonzero homology) marks the truncation-level joint
    spectrum on that axis.  Rows come out in row-major grid order, so
    identical inputs produce identical tables; a numerical failure at
    one point is recorded in its row instead of aborting the sweep.
    """
    if axis not in ("x", "y"):
        raise PreconditionError(f"axis must be 'x' or 'y', got {axis!r}")
    rows = []
    for g in grid.points():
        gamma = (g, 0.0 + 0.0j) if axis == "x" else (0.0 + 0.0j, g)
        try:
            hom = homology_dims(build(pair, gamma), rank_tol)
            rows.append(
                ScanRow(
                    g.real, g.imag, axis,
                    hom.h0, hom.h1, hom.h2, hom.member, hom.stable,
                )
            )
        except Exception as exc:  # recorded, not raised
            rows.append(
                ScanRow(g.real, g.imag, axis, -1, -1, -1, False, False, str(exc))
            )
    return rows
