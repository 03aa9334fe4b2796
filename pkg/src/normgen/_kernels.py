"""Hot numeric kernels: circle-grid scans behind the spectral profiles.

Every profile computation scans a grid of candidate phases; for each phase t
it needs the sorted distances |1 - e^{i(t + a_j)}| = 2|sin((t + a_j)/2)| from
the rotated spectrum to 1. These scans dominate the package's runtime, so each
kernel is implemented twice:

  * a numba ``@njit`` version (default when numba imports), and
  * a pure-numpy version, chunked so large spectra do not allocate the whole
    grid-by-spectrum matrix at once.

Set ``NORMGEN_NO_NUMBA=1`` in the environment to force the numpy path.
``benchmarks/bench_kernels.py`` times one backend against the other.
"""

import os

import numpy as np

_env = os.environ.get("NORMGEN_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _env in ("", "0", "false", "no")

if NUMBA_REQUESTED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy implementations


def _sorted_grid_matrix_np(angles, phases):
    d = np.abs(2.0 * np.sin(0.5 * (phases[:, None] + angles[None, :])))
    d.sort(axis=1)
    return np.ascontiguousarray(d[:, ::-1])


def _profile_scan_np(angles, phases):
    n = angles.shape[0]
    vals = np.full(n, np.inf)
    args = np.zeros(n, dtype=np.int64)
    chunk = max(1, int(2_000_000 // max(n, 1)))
    for start in range(0, phases.shape[0], chunk):
        p = phases[start : start + chunk]
        d = np.abs(2.0 * np.sin(0.5 * (p[:, None] + angles[None, :])))
        d.sort(axis=1)
        d = d[:, ::-1]  # descending: d[g, i] = (i+1)-th largest distance
        local_arg = np.argmin(d, axis=0)
        local_val = d[local_arg, np.arange(n)]
        better = local_val < vals
        vals[better] = local_val[better]
        args[better] = local_arg[better] + start
    return vals, args


def _mean_curve_np(angles, phases):
    n = angles.shape[0]
    out = np.empty(phases.shape[0])
    chunk = max(1, int(2_000_000 // max(n, 1)))
    for start in range(0, phases.shape[0], chunk):
        p = phases[start : start + chunk]
        d = np.abs(2.0 * np.sin(0.5 * (p[:, None] + angles[None, :])))
        out[start : start + p.shape[0]] = d.mean(axis=1)
    return out


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:
    # The jitted path avoids the per-phase transcendental storm: with
    # sin(a/2) and cos(a/2) tabulated once, sin((p+a)/2) is one fused
    # multiply-add per angle, so a whole grid row costs two sins total.
    # Sorting is replaced by an O(n) merge: walked in circular order the
    # distances rise to a single peak and fall again, so popping the
    # smaller of the two ends emits them in descending order.

    _TWO_PI = 2.0 * np.pi

    @njit(cache=True)
    def _prep_nb(angles):  # pragma: no cover - jitted
        n = angles.shape[0]
        a = np.empty(n)
        for j in range(n):
            x = angles[j] % _TWO_PI
            if x >= _TWO_PI or x < 0.0:
                x = 0.0
            a[j] = x
        a.sort()
        hs = np.empty(n)
        hc = np.empty(n)
        for j in range(n):
            hs[j] = np.sin(0.5 * a[j])
            hc[j] = np.cos(0.5 * a[j])
        return a, hs, hc

    @njit(cache=True)
    def _row_desc_nb(a, hs, hc, p, d, y, out):  # pragma: no cover - jitted
        n = a.shape[0]
        pr = p % _TWO_PI
        if pr >= _TWO_PI or pr < 0.0:
            pr = 0.0
        hps = np.sin(0.5 * pr)
        hpc = np.cos(0.5 * pr)
        for j in range(n):
            d[j] = 2.0 * abs(hps * hc[j] + hpc * hs[j])
            t = pr + a[j]
            if t >= _TWO_PI:
                t -= _TWO_PI
            y[j] = t
        # a is sorted, so y ascends except across at most one wrap
        w = 0
        for j in range(1, n):
            if y[j] < y[j - 1]:
                w = j
                break
        lo = 0
        hi = n - 1
        pos = n - 1
        while lo <= hi:
            jl = lo + w
            if jl >= n:
                jl -= n
            jh = hi + w
            if jh >= n:
                jh -= n
            if d[jl] <= d[jh]:
                out[pos] = d[jl]
                lo += 1
            else:
                out[pos] = d[jh]
                hi -= 1
            pos -= 1

    @njit(cache=True)
    def _sorted_grid_matrix_nb(angles, phases):  # pragma: no cover - jitted
        a, hs, hc = _prep_nb(angles)
        n = a.shape[0]
        g = phases.shape[0]
        d = np.empty(n)
        y = np.empty(n)
        out = np.empty((g, n))
        for k in range(g):
            _row_desc_nb(a, hs, hc, phases[k], d, y, out[k])
        return out

    @njit(cache=True)
    def _profile_scan_nb(angles, phases):  # pragma: no cover - jitted
        a, hs, hc = _prep_nb(angles)
        n = a.shape[0]
        g = phases.shape[0]
        d = np.empty(n)
        y = np.empty(n)
        row = np.empty(n)
        vals = np.full(n, np.inf)
        args = np.zeros(n, dtype=np.int64)
        for k in range(g):
            _row_desc_nb(a, hs, hc, phases[k], d, y, row)
            for i in range(n):
                if row[i] < vals[i]:
                    vals[i] = row[i]
                    args[i] = k
        return vals, args

    @njit(cache=True)
    def _mean_curve_nb(angles, phases):  # pragma: no cover - jitted
        a, hs, hc = _prep_nb(angles)
        n = a.shape[0]
        g = phases.shape[0]
        out = np.empty(g)
        for k in range(g):
            pr = phases[k] % _TWO_PI
            if pr >= _TWO_PI or pr < 0.0:
                pr = 0.0
            hps = np.sin(0.5 * pr)
            hpc = np.cos(0.5 * pr)
            acc = 0.0
            for j in range(n):
                acc += abs(hps * hc[j] + hpc * hs[j])
            out[k] = 2.0 * acc / n
        return out

    sorted_grid_matrix = _sorted_grid_matrix_nb
    profile_scan = _profile_scan_nb
    mean_curve = _mean_curve_nb
    BACKEND = "numba"
else:
    sorted_grid_matrix = _sorted_grid_matrix_np
    profile_scan = _profile_scan_np
    mean_curve = _mean_curve_np
    BACKEND = "numpy"


def sorted_distances(angles, phase):
    """Descending distances |1 - e^{i(phase + a_j)}| for a single phase."""
    d = np.abs(2.0 * np.sin(0.5 * (phase + angles)))
    d.sort()
    return d[::-1]
