"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

Backend selection happens once at import time via the environment
variable ``QPLANE_BACKEND``:

* unset          -- use numba when importable, else fall back to numpy
* ``numba``      -- require the jitted kernels (raise if numba is missing)
* ``numpy``      -- force the pure-numpy fallbacks

Both implementations of each kernel are always exported (the numba ones
are ``None`` when unavailable) so ``benchmarks/bench_kernels.py`` can
time them side by side.  The dispatched names used by the library are
``qmul_full`` and ``qpow_formula``.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("QPLANE_BACKEND", "").strip().lower()
if _CHOICE not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"QPLANE_BACKEND must be 'numba' or 'numpy', got {_CHOICE!r}"
    )

if _CHOICE in ("", "numba"):
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        if _CHOICE == "numba":
            raise RuntimeError("QPLANE_BACKEND=numba but numba is not importable")
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def qmul_full_numpy(a: np.ndarray, b: np.ndarray, q: complex) -> np.ndarray:
    """Untruncated normal-ordered product of two coefficient tables.

    ``a[i, k]`` is the coefficient of the monomial with x-degree ``i``
    and y-degree ``k``.  Reordering the middle factors costs the twist
    q^(i2*k1), so

        out[n, m] = sum_{i1+i2=n, k1+k2=m} q^(i2*k1) a[i1,k1] b[i2,k2].

    The result has shape ``(da+db+1, ka+kb+1)``; truncation (and the
    loss flag) is the caller's business.
    """
    da, ka = a.shape[0] - 1, a.shape[1] - 1
    db, kb = b.shape[0] - 1, b.shape[1] - 1
    out = np.zeros((da + db + 1, ka + kb + 1), dtype=np.complex128)
    i2 = np.arange(db + 1)
    for k1 in range(ka + 1):
        col = a[:, k1]
        if not col.any():
            continue
        # Scale b's rows by q^(i2*k1); guard 0 * inf when |q| > 1 and the
        # exponent overflows on cells that are zero anyway.
        with np.errstate(over="ignore", invalid="ignore"):
            twist = np.power(q, i2 * k1)
            scaled = np.where(b != 0, b * twist[:, None], 0)
        for k2 in range(kb + 1):
            g = scaled[:, k2]
            if g.any():
                out[:, k1 + k2] += np.convolve(col, g)
    return out


def qpow_formula_numpy(
    ii: np.ndarray, kk: np.ndarray, aa: np.ndarray, s: int, q: complex
) -> np.ndarray:
    """s-th power of a sparse table by direct multi-index enumeration.

    ``(ii[t], kk[t], aa[t])`` lists the support monomials.  Every
    s-tuple drawn from the support contributes its coefficient product
    times q^e to the cell (sum of x-degrees, sum of y-degrees), where e
    couples each y-degree with the x-degrees of all later factors:

        e = sum_{t=1}^{s-1} (i_{t+1} + ... + i_s) * k_t.
    """
    import itertools

    m = len(ii)
    mi, mk = int(ii.max()), int(kk.max())
    out = np.zeros((s * mi + 1, s * mk + 1), dtype=np.complex128)
    for idx in itertools.product(range(m), repeat=s):
        coeff = 1.0 + 0.0j
        wi = 0
        wk = 0
        for t in idx:
            coeff *= aa[t]
            wi += ii[t]
            wk += kk[t]
        if coeff == 0:
            continue
        exp = 0
        suffix = 0
        for t in range(s - 1, 0, -1):
            suffix += ii[idx[t]]
            exp += suffix * kk[idx[t - 1]]
        out[wi, wk] += coeff * q**exp
    return out


if NUMBA_ENABLED:

    @njit(cache=True)
    def _qmul_full_jit(a, b, q):  # pragma: no cover - exercised via dispatch
        da = a.shape[0] - 1
        ka = a.shape[1] - 1
        db = b.shape[0] - 1
        kb = b.shape[1] - 1
        out = np.zeros((da + db + 1, ka + kb + 1), dtype=np.complex128)
        for k1 in range(ka + 1):
            for i1 in range(da + 1):
                av = a[i1, k1]
                if av == 0:
                    continue
                for i2 in range(db + 1):
                    tw = av * q ** (i2 * k1)
                    for k2 in range(kb + 1):
                        bv = b[i2, k2]
                        if bv != 0:
                            out[i1 + i2, k1 + k2] += tw * bv
        return out

    @njit(cache=True)
    def _qpow_formula_jit(ii, kk, aa, s, q):  # pragma: no cover
        m = ii.shape[0]
        mi = 0
        mk = 0
        for t in range(m):
            mi = max(mi, ii[t])
            mk = max(mk, kk[t])
        out = np.zeros((s * mi + 1, s * mk + 1), dtype=np.complex128)
        idx = np.zeros(s, dtype=np.int64)
        total = m**s
        for _ in range(total):
            coeff = 1.0 + 0.0j
            wi = 0
            wk = 0
            for t in range(s):
                e = idx[t]
                coeff *= aa[e]
                wi += ii[e]
                wk += kk[e]
            if coeff != 0:
                exp = 0
                suffix = 0
                for t in range(s - 1, 0, -1):
                    suffix += ii[idx[t]]
                    exp += suffix * kk[idx[t - 1]]
                out[wi, wk] += coeff * q**exp
            for t in range(s - 1, -1, -1):
                idx[t] += 1
                if idx[t] < m:
                    break
                idx[t] = 0
        return out

    def qmul_full_numba(a, b, q):
        return _qmul_full_jit(
            np.ascontiguousarray(a, dtype=np.complex128),
            np.ascontiguousarray(b, dtype=np.complex128),
            complex(q),
        )

    def qpow_formula_numba(ii, kk, aa, s, q):
        return _qpow_formula_jit(
            np.ascontiguousarray(ii, dtype=np.int64),
            np.ascontiguousarray(kk, dtype=np.int64),
            np.ascontiguousarray(aa, dtype=np.complex128),
            int(s),
            complex(q),
        )

else:
    qmul_full_numba = None
    qpow_formula_numba = None


if NUMBA_ENABLED:
    qmul_full = qmul_full_numba
    qpow_formula = qpow_formula_numba
else:
    qmul_full = qmul_full_numpy
    qpow_formula = qpow_formula_numpy
