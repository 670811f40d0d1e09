"""Computable pieces of the spiral (q-) and disk topologies on the plane.

Open sets are represented as finite unions of open disks, plus lazily
evaluated q-hulls of such unions.  Membership everywhere uses strict
inequalities: all the sets modelled here are open, so boundary points
are out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import NonConvergenceError, PreconditionError

__all__ = [
    "Disk",
    "DiskUnion",
    "QHull",
    "qhull_contains",
    "spiral_neighborhood",
    "point_q_closure",
    "is_quasicompact_d",
    "is_q_spiraling",
]

# Safety stop for the geometric search in hull membership; reached only
# for |z| below ~|q|^_MAX_HULL_STEPS of the set radius.
_MAX_HULL_STEPS = 100_000


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


@dataclass(frozen=True)
class DiskUnion:
    """Finite union of open disks; the empty union is the empty set."""

    disks: tuple[Disk, ...]

    def __init__(self, disks=()):
        object.__setattr__(
            self,
            "disks",
            tuple(d if isinstance(d, Disk) else Disk(complex(d[0]), float(d[1])) for d in disks),
        )

    @staticmethod
    def single(center: complex, radius: float) -> "DiskUnion":
        return DiskUnion([Disk(complex(center), float(radius))])

    def contains(self, z: complex) -> bool:
        return any(d.contains(z) for d in self.disks)

    def bounding_radius(self) -> float:
        """Radius of the smallest origin-centered disk covering the set."""
        if not self.disks:
            return 0.0
        return max(abs(d.center) + d.radius for d in self.disks)

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(re_lo, re_hi, im_lo, im_hi) covering the union."""
        if not self.disks:
            return (0.0, 0.0, 0.0, 0.0)
        re_lo = min(d.center.real - d.radius for d in self.disks)
        re_hi = max(d.center.real + d.radius for d in self.disks)
        im_lo = min(d.center.imag - d.radius for d in self.disks)
        im_hi = max(d.center.imag + d.radius for d in self.disks)
        return (re_lo, re_hi, im_lo, im_hi)


def _check_contractive(q: complex) -> complex:
    q = complex(q)
    if not 0 < abs(q) < 1:
        raise PreconditionError(f"need 0 < |q| < 1, got q = {q}")
    return q


@dataclass(frozen=True)
class QHull:
    """Lazy q-hull: the base set, all its q^n copies (n >= 0), and 0.

    Membership is decidable because the copies shrink geometrically:
    once ``|q|^n * R < |z|`` (R the bounding radius) no later copy can
    reach ``z``.  Starting the union at ``n = 0`` makes the hull a
    superset of its base and turns hulling into an idempotent operation.
    """

    base: Union[DiskUnion, "QHull"]
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "q", _check_contractive(self.q))

    def contains(self, z: complex) -> bool:
        z = complex(z)
        if z == 0:
            return True
        r = self.base.bounding_radius()
        if r == 0.0 or abs(z) >= r:
            # n = 0 already cannot reach z (copies only shrink).
            return self.base.contains(z) if abs(z) < r else False
        n_stop = int(math.log(abs(z) / r) / math.log(abs(self.q))) + 2
        n_stop = min(n_stop, _MAX_HULL_STEPS)
        scale = 1.0 + 0.0j
        for _ in range(n_stop + 1):
            if self.base.contains(z / scale):
                return True
            scale *= self.q
            if abs(scale) * r <= abs(z):
                break
        return False

    def bounding_radius(self) -> float:
        return self.base.bounding_radius()

    def bounding_box(self) -> tuple[float, float, float, float]:
        # The hull stays inside the origin-centered disk of the base's
        # bounding radius, and contains the base itself.
        r = self.base.bounding_radius()
        lo, hi = -r, r
        return (lo, hi, lo, hi)


Region = Union[DiskUnion, QHull]


def qhull_contains(hull: QHull, z: complex) -> bool:
    """True iff ``z`` is 0 or lands in some ``q^n`` copy of the base."""
    return hull.contains(z)


def spiral_neighborhood(
    lam: complex, eps: float, delta: float, q: complex
) -> DiskUnion:
    """Disk chain covering the forward orbit ``{q^m lam} + {0}``.

    Returns ``B(0, eps)`` together with ``B(q^m lam, |q|^m delta)`` for
    ``m = 0..n``, where ``n`` is minimal with
    ``|q|^(n+1) (|lam| + delta) <= eps``; beyond that the orbit disks
    sit inside the base disk already.
    """
    q = _check_contractive(q)
    lam = complex(lam)
    if lam == 0:
        raise PreconditionError("orbit point must be nonzero; use the single disk B(0, eps)")
    if not (eps > 0 and delta > 0):
        raise PreconditionError(f"radii must be positive, got eps={eps}, delta={delta}")
    reach = abs(lam) + delta
    n = 0
    while abs(q) ** (n + 1) * reach > eps:
        n += 1
        if n > _MAX_HULL_STEPS:
            raise NonConvergenceError("orbit does not sink into the base disk")
    disks = [Disk(0.0, float(eps))]
    scale = 1.0 + 0.0j
    for m in range(n + 1):
        disks.append(Disk(scale * lam, abs(scale) * delta))
        scale *= q
    return DiskUnion(disks)


def point_q_closure(x: complex, k_max: int, q: complex) -> list[complex]:
    """Backward orbit prefix ``[x / q^k for k = 0..k_max]``.

    This is the closure of a point in the spiral topology, truncated to
    a finite prefix; magnitudes grow strictly for ``x != 0``.
    """
    q = _check_contractive(q)
    if k_max < 0:
        raise PreconditionError(f"k_max must be >= 0, got {k_max}")
    x = complex(x)
    out = []
    scale = 1.0 + 0.0j
    for _ in range(k_max + 1):
        out.append(x / scale)
        scale *= q
    return out


def is_quasicompact_d(region) -> bool:
    """Boundedness, which is quasicompactness for the disk topology.

    Accepts a :class:`DiskUnion`, a :class:`QHull`, or a plain sequence
    of points.  Finite disk unions are always bounded; hulls add only
    shrinking copies of their base.
    """
    if isinstance(region, (DiskUnion, QHull)):
        return bool(np.isfinite(region.bounding_radius()))
    pts = np.asarray(list(region), dtype=np.complex128)
    if pts.size == 0:
        return True
    return bool(np.all(np.isfinite(pts.view(np.float64))))


def is_q_spiraling(
    region,
    q: complex,
    samples: int = 1000,
    seed: int = 0,
    predicate: Callable[[complex], bool] | None = None,
    box: tuple[float, float, float, float] | None = None,
    retry_factor: int = 50,
) -> bool:
    """Probabilistic, one-sided check that a set spirals into itself.

    Rejection-samples points of the set inside its bounding box and
    tests ``q * z`` membership plus membership of the origin.  Any
    counterexample returns ``False``; otherwise ``True`` (which can be
    a false positive, never a false negative).  ``predicate``/``box``
    override the region's own membership and bounding box.
    """
    q = _check_contractive(q)
    member = predicate if predicate is not None else region.contains
    if box is None:
        box = region.bounding_box()
    re_lo, re_hi, im_lo, im_hi = box
    if not member(0.0 + 0.0j):
        return False
    if samples < 1:
        return True
    rng = np.random.default_rng(seed)
    accepted = 0
    budget = samples * retry_factor
    for _ in range(budget):
        z = complex(rng.uniform(re_lo, re_hi), rng.uniform(im_lo, im_hi))
        if not member(z):
            continue
        accepted += 1
        if not member(q * z):
            return False
        if accepted >= samples:
            break
    if accepted == 0:
        raise NonConvergenceError(
            f"rejection sampling found no member points in {budget} draws"
        )
    return True
