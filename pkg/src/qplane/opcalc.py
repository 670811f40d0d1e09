"""Finite matrix models of the q-commuting plane and their calculus.

The reference pair truncates the weighted-shift model: ``T`` shifts the
basis down one slot (the last vector maps to zero, which keeps the
commutation relation exact) and ``S`` is diagonal with entries ``q^n``.
On top of it live the two-variable holomorphic calculus
``f |-> sum_n f_n(T) S^n``, the polynomial bridge from
:class:`~qplane.qalgebra.QSeries`, joint-spectrum bookkeeping and the
resolvent/decay identity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import NonConvergenceError, PreconditionError
from .holo import HoloSeries
from .qalgebra import QSeries

__all__ = [
    "OperatorPair",
    "QFunctionRep",
    "model_pair",
    "qcommutation_residual",
    "qf_mul",
    "qseries_to_qfunction",
    "calc",
    "calc_qseries",
    "eigenvalues",
    "SpectrumDescription",
    "harte_model_spectrum",
    "pair_eigenvalues",
    "SpectralMappingReport",
    "spectral_mapping_check",
    "resolvent_twist_residual",
    "DecayCheckRow",
    "radical_decay_check",
]

# Relative Frobenius tolerance for accepting a pair as q-commuting.
PAIR_RESIDUAL_TOL = 1e-12


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise PreconditionError("matrix entries must be finite")
    return arr.copy()


def qcommutation_residual(t: np.ndarray, s: np.ndarray, q: complex) -> float:
    """Frobenius norm of ``T S - (1/q) S T``."""
    t = _as_matrix(t)
    s = _as_matrix(s)
    if t.shape != s.shape:
        raise PreconditionError(f"dimension mismatch: {t.shape} vs {s.shape}")
    return float(np.linalg.norm(t @ s - (1.0 / q) * (s @ t)))


@dataclass(frozen=True)
class OperatorPair:
    """A pair of N x N matrices with ``T S = (1/q) S T``.

    The relation is verified at construction up to a relative Frobenius
    residual of ``1e-12`` (it holds exactly for :func:`model_pair`).
    """

    t: np.ndarray
    s: np.ndarray
    q: complex

    def __post_init__(self):
        if self.q == 0:
            raise PreconditionError("q must be nonzero")
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "t", _as_matrix(self.t))
        object.__setattr__(self, "s", _as_matrix(self.s))
        if self.t.shape != self.s.shape:
            raise PreconditionError(
                f"dimension mismatch: {self.t.shape} vs {self.s.shape}"
            )
        scale = np.linalg.norm(self.t) * np.linalg.norm(self.s)
        residual = qcommutation_residual(self.t, self.s, self.q)
        if residual > PAIR_RESIDUAL_TOL * max(scale, 1e-300):
            raise PreconditionError(
                f"pair is not q-commuting: residual {residual:.3e} "
                f"exceeds {PAIR_RESIDUAL_TOL:.0e} * {scale:.3e}"
            )

    @property
    def n(self) -> int:
        return self.t.shape[0]

    def residual(self) -> float:
        return qcommutation_residual(self.t, self.s, self.q)


def model_pair(q: complex, n: int) -> OperatorPair:
    """Truncated shift/diagonal model on basis vectors ``e_0..e_{n-1}``.

    ``T e_m = e_{m+1}`` (and ``T e_{n-1} = 0``: the truncation drops the
    overflow instead of wrapping, so the relation stays exact), while
    ``S e_m = q^m e_m``.
    """
    if n < 1:
        raise PreconditionError(f"dimension must be >= 1, got {n}")
    if q == 0:
        raise PreconditionError("q must be nonzero")
    t = np.zeros((n, n), dtype=np.complex128)
    for m in range(n - 1):
        t[m + 1, m] = 1.0
    s = np.diag(np.power(complex(q), np.arange(n)))
    return OperatorPair(t, s, complex(q))


# ---------------------------------------------------------------------------
# two-variable function representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QFunctionRep:
    """A function ``sum_n f_n(x) y^n`` with a declared polydisk domain.

    ``f_list[n]`` is the one-variable coefficient series ``f_n``;
    ``r_x``/``r_y`` are the radii the series is claimed to live on,
    which the calculus checks against the spectra of the pair.
    """

    q: complex
    f_list: tuple[HoloSeries, ...]
    r_x: float
    r_y: float

    def __post_init__(self):
        if self.q == 0:
            raise PreconditionError("q must be nonzero")
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "f_list", tuple(self.f_list))
        if not self.f_list:
            raise PreconditionError("need at least the n = 0 coefficient series")
        if not (self.r_x > 0 and self.r_y > 0):
            raise PreconditionError(
                f"domain radii must be positive, got ({self.r_x}, {self.r_y})"
            )

    @property
    def order(self) -> int:
        """Largest y-degree carried (the M in ``n = 0..M``)."""
        return len(self.f_list) - 1

    def char_value(self, gamma: tuple[complex, complex]) -> complex:
        """Value at an axis character: ``f(z, 0) = f_0(z)`` and
        ``f(0, w) = sum_n f_n(0) w^n``."""
        z, w = complex(gamma[0]), complex(gamma[1])
        if z != 0 and w != 0:
            raise PreconditionError(f"({z}, {w}) is not on an axis")
        if w == 0:
            return self.f_list[0](z)
        constants = HoloSeries([fn.coeffs[0] for fn in self.f_list])
        return constants(w)

    def p_norm(self, rho_x: float, rho_y: float) -> float:
        """Seminorm ``sum_n ||f_n||_{rho_x} rho_y^n``."""
        return float(
            sum(fn.norm(rho_x) * rho_y**n for n, fn in enumerate(self.f_list))
        )


def qf_mul(f: QFunctionRep, g: QFunctionRep) -> QFunctionRep:
    """Product of function representations under the twisted rule.

    ``(fg)_n = sum_{i+j=n} f_i(x) g_j(q^i x)``: pushing ``y^i`` across
    ``g_j`` rescales its argument by ``q^i``.  Domain radii of the
    product are the pointwise minima.
    """
    if f.q != g.q:
        raise PreconditionError(f"q mismatch: {f.q} vs {g.q}")
    order = f.order + g.order
    cols: list[HoloSeries | None] = [None] * (order + 1)
    for i, fi in enumerate(f.f_list):
        if fi.max_degree < 0:
            continue
        for j, gj in enumerate(g.f_list):
            term = fi * gj.scale_arg(f.q**i)
            prev = cols[i + j]
            cols[i + j] = term if prev is None else prev + term
    degree = max(fn.trunc_degree for fn in (*f.f_list, *g.f_list))
    filled = tuple(
        c if c is not None else HoloSeries.zero(degree) for c in cols
    )
    return QFunctionRep(f.q, filled, min(f.r_x, g.r_x), min(f.r_y, g.r_y))


def qseries_to_qfunction(f: QSeries, r_x: float, r_y: float) -> QFunctionRep:
    """Read a polynomial table as a function representation."""
    cols = tuple(f.series_in_x(k) for k in range(f.trunc_degree + 1))
    return QFunctionRep(f.q, cols, r_x, r_y)


# ---------------------------------------------------------------------------
# the calculus
# ---------------------------------------------------------------------------


def spectral_radius(m: np.ndarray) -> float:
    ev = eigenvalues(m)
    return float(np.max(np.abs(ev))) if ev.size else 0.0


def calc(f: QFunctionRep, pair: OperatorPair, check_spectra: bool = True) -> np.ndarray:
    """Evaluate ``sum_n f_n(T) S^n`` on the pair.

    The domain condition asks the (numerical, truncation-level) spectra
    to sit strictly inside the declared radii: ``sr(T) < r_x`` and
    ``sr(S) < r_y``.  Note the truncation spectra can undershoot those
    of the untruncated model badly -- the shift truncates to a nilpotent
    matrix -- so passing this check says nothing about the infinite
    model; see :func:`harte_model_spectrum` for the analytic picture.
    """
    if f.q != pair.q:
        raise PreconditionError(f"q mismatch: function {f.q} vs pair {pair.q}")
    if check_spectra:
        sr_t = spectral_radius(pair.t)
        if not sr_t < f.r_x:
            raise PreconditionError(
                f"spectrum outside domain: r_x = {f.r_x} but spectral radius of T is {sr_t}"
            )
        sr_s = spectral_radius(pair.s)
        if not sr_s < f.r_y:
            raise PreconditionError(
                f"spectrum outside domain: r_y = {f.r_y} but spectral radius of S is {sr_s}"
            )
    n = pair.n
    acc = np.zeros((n, n), dtype=np.complex128)
    s_pow = np.eye(n, dtype=np.complex128)
    for m, fn in enumerate(f.f_list):
        if m > 0:
            s_pow = s_pow @ pair.s
        if fn.max_degree >= 0:
            acc += fn.eval_matrix(pair.t) @ s_pow
    return acc


def calc_qseries(f: QSeries, pair: OperatorPair) -> np.ndarray:
    """Evaluate a polynomial table: ``sum_ik a_ik T^i S^k``.

    This is the representation ``x -> T``, ``y -> S``; because the pair
    satisfies the same rewriting rule as the plane, it is an algebra
    homomorphism on tables (products map to products).
    """
    if f.q != pair.q:
        raise PreconditionError(f"q mismatch: series {f.q} vs pair {pair.q}")
    n = pair.n
    acc = np.zeros((n, n), dtype=np.complex128)
    s_pow = np.eye(n, dtype=np.complex128)
    for k in range(f.trunc_degree + 1):
        if k > 0:
            s_pow = s_pow @ pair.s
        col = f.series_in_x(k)
        if col.max_degree >= 0:
            acc += col.eval_matrix(pair.t) @ s_pow
    return acc


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """Numerical spectrum of a dense matrix.

    Delegates to LAPACK (balancing, Hessenberg reduction, shifted QR),
    which is backward stable; a failed QR sweep surfaces as
    :class:`~qplane.errors.NonConvergenceError`.
    """
    m = _as_matrix(m)
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError(f"eigenvalue iteration failed: {exc}") from exc


# ---------------------------------------------------------------------------
# spectra of the model pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumDescription:
    """Joint-spectrum answer placed on the two axes.

    ``analytic`` mode is the untruncated model: the x branch is the full
    closed unit disk (``x_disk_radius``), the y branch the geometric
    orbit ``{q^m}`` with its limit 0.  ``numerical`` mode reports the
    eigenvalues of the N-truncations instead, which collapses the x
    branch to ``{0}`` -- the truncation gap is real and intentional.
    """

    mode: str
    x_disk_radius: float | None
    x_points: tuple[complex, ...]
    y_points: tuple[complex, ...]


def harte_model_spectrum(
    q: complex, n: int, mode: Literal["analytic", "numerical"]
) -> SpectrumDescription:
    if n < 1:
        raise PreconditionError(f"dimension must be >= 1, got {n}")
    if mode == "analytic":
        if not 0 < abs(q) < 1:
            raise PreconditionError(
                f"analytic description needs 0 < |q| < 1, got q = {q}"
            )
        orbit = tuple(complex(q) ** m for m in range(n)) + (0.0 + 0.0j,)
        return SpectrumDescription("analytic", 1.0, (), orbit)
    if mode == "numerical":
        pair = model_pair(q, n)
        ev_t = tuple(map(complex, eigenvalues(pair.t)))
        ev_s = tuple(map(complex, eigenvalues(pair.s)))
        return SpectrumDescription("numerical", None, ev_t, ev_s)
    raise ValueError(f"unknown mode {mode!r}")


def pair_eigenvalues(
    actual: Sequence[complex], predicted: Sequence[complex]
) -> tuple[np.ndarray, np.ndarray]:
    """Match two eigenvalue multisets and report the pair distances.

    Multisets of nearly coincident eigenvalues make naive index pairing
    meaningless, so up to 64 points this solves the assignment problem
    exactly; beyond that a greedy closest-pair sweep keeps it cheap.
    Returns ``(perm, distances)`` where ``predicted[perm[i]]`` is the
    partner of ``actual[i]``.
    """
    a = np.asarray(actual, dtype=np.complex128)
    p = np.asarray(predicted, dtype=np.complex128)
    if a.size != p.size:
        raise PreconditionError(f"multiset size mismatch: {a.size} vs {p.size}")
    if a.size == 0:
        return np.zeros(0, dtype=np.intp), np.zeros(0)
    cost = np.abs(a[:, None] - p[None, :])
    if a.size <= 64:
        from scipy.optimize import linear_sum_assignment

        rows, cols = linear_sum_assignment(cost)
        return cols, cost[rows, cols]
    # Greedy fallback: repeatedly take the globally closest unmatched pair.
    work = cost.copy()
    perm = np.zeros(a.size, dtype=np.intp)
    for _ in range(a.size):
        i, j = np.unravel_index(np.argmin(work), work.shape)
        perm[i] = j
        work[i, :] = np.inf
        work[:, j] = np.inf
    return perm, cost[np.arange(a.size), perm]


@dataclass(frozen=True)
class SpectralMappingReport:
    eigenvalues: tuple[complex, ...]
    predicted: tuple[complex, ...]
    distances: tuple[float, ...]
    max_distance: float
    x_branch_curve: tuple[tuple[complex, complex], ...]


def spectral_mapping_check(
    f: QFunctionRep, pair: OperatorPair, curve_samples: int = 64
) -> SpectralMappingReport:
    """Compare the spectrum of ``f(T, S)`` with its predicted image.

    For the triangular model the diagonal of ``f(T, S)`` carries exactly
    the character values ``f(0, q^m)``, so the y-branch prediction is
    that multiset; the report pairs it optimally against the computed
    eigenvalues.  The x-branch image ``{f(z, 0): |z| <= 1}`` is returned
    as a sampled boundary curve for side-by-side inspection.
    """
    a = calc(f, pair)
    ev = eigenvalues(a)
    predicted = np.asarray(
        [f.char_value((0.0, pair.q**m)) for m in range(pair.n)], dtype=np.complex128
    )
    perm, distances = pair_eigenvalues(ev, predicted)
    theta = 2.0 * np.pi * np.arange(max(curve_samples, 1)) / max(curve_samples, 1)
    curve = tuple(
        (complex(z), f.char_value((z, 0.0))) for z in np.exp(1j * theta)
    )
    return SpectralMappingReport(
        tuple(map(complex, ev)),
        tuple(complex(predicted[j]) for j in perm),
        tuple(map(float, distances)),
        float(np.max(distances)) if distances.size else 0.0,
        curve,
    )


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------


def _right_resolvent(a: np.ndarray, m: np.ndarray, lam: complex, power: int) -> np.ndarray:
    """Right-multiply ``a`` by ``(m - lam)^(-power)`` via sequential solves."""
    n = m.shape[0]
    shifted = m - lam * np.eye(n, dtype=np.complex128)
    out = a
    try:
        for _ in range(power):
            out = np.linalg.solve(shifted.T, out.T).T
    except np.linalg.LinAlgError as exc:
        raise PreconditionError(f"singular resolvent at lambda = {lam}") from exc
    return out


def resolvent_twist_residual(
    pair: OperatorPair,
    i: int,
    k: int,
    m: int,
    lam: complex,
    relative: bool = False,
) -> float:
    """Residual of the twisted resolvent identity.

    Measures ``|| S^k T^i (T - lam)^(-m)
    - q^(ik) T^i (q^k T - lam)^(-m) S^k ||_F``.  For ``m = 0`` this
    degenerates to the plain reordering rule.  ``relative`` divides by
    the Frobenius norm of the left-hand side.
    """
    if min(i, k, m) < 0:
        raise PreconditionError("exponents must be nonnegative")
    q = pair.q
    t_i = np.linalg.matrix_power(pair.t, i)
    s_k = np.linalg.matrix_power(pair.s, k)
    lhs = _right_resolvent(s_k @ t_i, pair.t, lam, m)
    rhs = q ** (i * k) * _right_resolvent(t_i, (q**k) * pair.t, lam, m) @ s_k
    res = float(np.linalg.norm(lhs - rhs))
    if relative:
        scale = float(np.linalg.norm(lhs))
        return res / scale if scale > 0 else res
    return res


@dataclass(frozen=True)
class DecayCheckRow:
    s: int
    root_norm: float
    ratio: float


def radical_decay_check(
    f: QFunctionRep, pair: OperatorPair, s_max: int
) -> list[DecayCheckRow]:
    """Power-decay profile of a mixed-term function of the pair.

    Requires ``f_0 = 0`` and ``f_n(0) = 0`` (every term carries both an
    x and a y factor); then ``A = f(T, S)`` should be quasinilpotent for
    ``|q| < 1``, with ``||A^s||^(1/s)`` dominated by a constant times
    ``|q|^((s-1)/2)``.  Each row reports the root norm (spectral norm)
    and its ratio against that envelope.
    """
    if s_max < 1:
        raise PreconditionError(f"s_max must be >= 1, got {s_max}")
    if f.f_list[0].max_degree >= 0:
        raise PreconditionError("mixed-term check needs f_0 = 0")
    for n, fn in enumerate(f.f_list):
        if n >= 1 and fn.coeffs[0] != 0:
            raise PreconditionError(
                f"mixed-term check needs f_n(0) = 0, violated at n = {n}"
            )
    a = calc(f, pair)
    aq = abs(pair.q)
    rows = []
    acc = a.copy()
    for s in range(1, s_max + 1):
        if s > 1:
            acc = acc @ a
        root = float(np.linalg.norm(acc, 2)) ** (1.0 / s)
        envelope = aq ** ((s - 1) / 2.0)
        rows.append(DecayCheckRow(s, root, root / envelope))
    return rows
