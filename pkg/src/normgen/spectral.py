"""Spectral profiles of unitary matrices, trace-normalized.

All norms here are normalized so the identity has one-norm and two-norm 1:
for an n x n matrix the one-norm is the mean of the singular values and the
two-norm is the Frobenius norm divided by sqrt(n).

The central quantity is the projective profile of a unitary u: for each index
i, the infimum over unit scalars lam of the (i+1)-th largest singular value of
1 - lam*u.  For unitary u with eigenvalue angles a_j, the singular values of
1 - e^{it}u are 2|sin((t + a_j)/2)|, so everything reduces to scans over the
phase circle; see _kernels for the scan backends.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from . import _kernels
from .config import TOL
from .errors import (
    DimensionError,
    NumericalDegeneracyError,
    ValidationError,
)

TWO_PI = 2.0 * math.pi

# full sorted grid matrices are only materialized below this size; above it
# the lean scan kernel plus single-basin refinement is used instead
_DENSE_LIMIT = 512


def canon_angle(x):
    """Map angles to the canonical branch (-pi, pi]."""
    r = np.mod(np.asarray(x, dtype=float), TWO_PI)
    r = np.where(r > math.pi, r - TWO_PI, r)
    if np.ndim(x) == 0:
        return float(r)
    return r


def chord(delta):
    """Chordal distance on the circle: |1 - e^{i delta}|."""
    return np.abs(2.0 * np.sin(0.5 * np.asarray(delta, dtype=float)))


def _as_square(x, what="matrix"):
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {m.shape}")
    if m.shape[0] == 0:
        raise DimensionError(f"{what} must be nonempty")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{what} has non-finite entries")
    return m


def unitarity_defect(m):
    """Max-norm of m m* - I."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def matrix_from_json(obj, what="matrix"):
    try:
        n = int(obj["n"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed {what} object: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise DimensionError(
            f"{what} parts must be {n}x{n}, got {re.shape} and {im.shape}"
        )
    return re + 1j * im


@dataclass(frozen=True)
class UnitaryRep:
    """A validated unitary matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix, "unitary")
        defect = unitarity_defect(m)
        if defect > TOL.unitarity:
            raise ValidationError(
                f"matrix is not unitary: defect {defect:.3e} > {TOL.unitarity:g}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self):
        return self.matrix.shape[0]

    def to_json(self):
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, obj):
        return cls(matrix_from_json(obj, "unitary"))


@dataclass(frozen=True)
class CircleSpectrum:
    """Eigenvalue angles of a unitary, canonicalized to (-pi, pi]."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 1 or a.shape[0] == 0:
            raise DimensionError(f"angles must be a nonempty vector, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("angles must be finite")
        a = canon_angle(a)
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def n(self):
        return self.angles.shape[0]

    def sorted(self):
        return CircleSpectrum(np.sort(self.angles))

    def to_unitary(self):
        return UnitaryRep(np.diag(np.exp(1j * self.angles)))

    def to_json(self):
        return {"angles": [float(a) for a in self.angles]}

    @classmethod
    def from_json(cls, obj):
        try:
            angles = obj["angles"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed spectrum object: {exc}") from exc
        return cls(np.asarray(angles, dtype=float))


@dataclass(frozen=True)
class SpectralProfile:
    """Non-increasing profile values, optionally with witness phases.

    kind is "mu" for plain singular value profiles and "ell" for projective
    ones; witnesses (unit scalars attaining each infimum) only accompany the
    latter.
    """

    kind: str
    values: np.ndarray
    witnesses: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in ("mu", "ell"):
            raise ValidationError(f"unknown profile kind {self.kind!r}")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.shape[0] == 0:
            raise DimensionError("profile needs at least one value")
        if np.any(v[1:] > v[:-1] + 1e-10):
            raise ValidationError("profile values must be non-increasing")
        if np.any(v < -1e-12):
            raise ValidationError("profile values must be nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.witnesses is not None:
            w = np.asarray(self.witnesses, dtype=complex)
            if w.shape != v.shape:
                raise DimensionError("one witness phase per profile value")
            w = w.copy()
            w.setflags(write=False)
            object.__setattr__(self, "witnesses", w)

    @property
    def n(self):
        return self.values.shape[0]

    def to_json(self):
        out = {"kind": self.kind, "values": [float(v) for v in self.values]}
        if self.witnesses is not None:
            out["phases"] = [[float(w.real), float(w.imag)] for w in self.witnesses]
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            kind = obj["kind"]
            values = np.asarray(obj["values"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed profile object: {exc}") from exc
        witnesses = None
        if "phases" in obj:
            pairs = np.asarray(obj["phases"], dtype=float)
            if pairs.ndim != 2 or pairs.shape[1] != 2:
                raise ValidationError("phases must be [re, im] pairs")
            witnesses = pairs[:, 0] + 1j * pairs[:, 1]
        return cls(kind, values, witnesses)


@dataclass(frozen=True)
class RankDistance:
    """Normalized rank k/n as an exact fraction."""

    k: int
    n: int

    def __post_init__(self):
        if not (0 <= self.k <= self.n) or self.n <= 0:
            raise ValidationError(f"bad rank pair {self.k}/{self.n}")

    def as_fraction(self):
        return Fraction(self.k, self.n)

    def __float__(self):
        return self.k / self.n

    def to_json(self):
        return {"num": self.k, "den": self.n}


# ---------------------------------------------------------------------------
# coercion helpers shared across modules


def as_unitary(u, what="unitary"):
    if isinstance(u, UnitaryRep):
        return u
    if isinstance(u, CircleSpectrum):
        return u.to_unitary()
    return UnitaryRep(_as_square(u, what))


def spectrum_of(u, seed=0):
    """Eigenvalue angles of u; diagonalizes unless u already is a spectrum."""
    if isinstance(u, CircleSpectrum):
        return u
    spec, _ = diagonalize_normal(u, seed=seed)
    return spec


# ---------------------------------------------------------------------------
# plain singular value profiles


def singular_values(x):
    """Descending singular values of a square complex matrix."""
    m = _as_square(x)
    return np.linalg.svd(m, compute_uv=False)


def s_number(x, i):
    """(i+1)-th largest singular value; the profile is 1-indexed by rank."""
    s = singular_values(x)
    if not (0 <= i < s.shape[0]):
        raise IndexError(f"index {i} out of range for size {s.shape[0]}")
    return float(s[i])


def one_norm(x):
    """Trace-normalized trace norm: mean of the singular values."""
    return float(np.mean(singular_values(x)))


def two_norm(x):
    """Trace-normalized Hilbert-Schmidt norm."""
    m = _as_square(x)
    return float(np.linalg.norm(m) / math.sqrt(m.shape[0]))


def proj_distance(a, b):
    """Two-norm distance from a to the nearest unit multiple of b."""
    a = _as_square(a)
    b = _as_square(b)
    if a.shape != b.shape:
        raise DimensionError("shape mismatch")
    n = a.shape[0]
    na = np.linalg.norm(a) ** 2 / n
    nb = np.linalg.norm(b) ** 2 / n
    cross = abs(np.trace(a.conj().T @ b)) / n
    return math.sqrt(max(0.0, na + nb - 2.0 * cross))


def projective_residual(a, b):
    """Entrywise max of a - lam*b at the best unit phase lam.

    Unlike proj_distance this has no square-root floor near zero, so exact
    projective equality reports at machine precision.
    """
    a = _as_square(a)
    b = _as_square(b)
    if a.shape != b.shape:
        raise DimensionError("shape mismatch")
    w = b.conj().T @ a
    tr = np.trace(w)
    if abs(tr) > 1e-8:
        lam = tr / abs(tr)
    else:
        d = np.diagonal(w)
        k = int(np.argmax(np.abs(d)))
        lam = d[k] / abs(d[k]) if abs(d[k]) > 0 else 1.0
    return float(np.max(np.abs(a - lam * b)))


# ---------------------------------------------------------------------------
# circle-grid minimization machinery


_GRID = None


def _grid():
    global _GRID
    if _GRID is None:
        g = np.arange(TOL.grid_n) * (TWO_PI / TOL.grid_n)
        g.setflags(write=False)
        _GRID = g
    return _GRID


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a, b, iters=60):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        if b - a < 1e-12:
            break
    return (c, fc) if fc <= fd else (d, fd)


def _candidate_points(curve, vmin, h):
    """Grid points that may be nearest to the true minimizer.

    The objectives are 1-Lipschitz in arc length, so the grid point nearest
    the true minimizer sits within h/2 of the grid minimum in value; flag all
    such points, lowest first, capped to keep adversarial flat curves cheap.
    """
    thresh = vmin + 0.5000001 * h + 1e-15
    idx = np.nonzero(curve <= thresh)[0]
    if idx.shape[0] > 512:
        idx = idx[np.argsort(curve[idx], kind="stable")][:512]
    else:
        idx = idx[np.argsort(curve[idx], kind="stable")]
    return [int(k) for k in idx]


def _refine(f, curve, h):
    vmin = float(np.min(curve))
    best_v = vmin
    best_t = float(np.argmin(curve)) * h
    for k in _candidate_points(curve, vmin, h):
        t0 = k * h
        t, v = _golden_min(f, t0 - h, t0 + h)
        if v < best_v:
            best_v, best_t = v, t
    return best_v, best_t % TWO_PI


def _index_value(angles, i, phase):
    d = np.abs(2.0 * np.sin(0.5 * (phase + angles)))
    n = d.shape[0]
    return float(np.partition(d, n - 1 - i)[n - 1 - i])


def _index_curve(angles, i, phases):
    n = angles.shape[0]
    out = np.empty(phases.shape[0])
    chunk = max(1, int(2_000_000 // n))
    for start in range(0, phases.shape[0], chunk):
        p = phases[start : start + chunk]
        d = np.abs(2.0 * np.sin(0.5 * (p[:, None] + angles[None, :])))
        out[start : start + p.shape[0]] = np.partition(d, n - 1 - i, axis=1)[
            :, n - 1 - i
        ]
    return out


def _profile_dense(angles):
    phases = _grid()
    h = TWO_PI / TOL.grid_n
    mat = _kernels.sorted_grid_matrix(angles, phases)
    n = angles.shape[0]
    vals = np.empty(n)
    wits = np.empty(n, dtype=complex)
    for i in range(n):
        v, t = _refine(lambda t: _index_value(angles, i, t), mat[:, i], h)
        vals[i] = v
        wits[i] = complex(math.cos(t), math.sin(t))
    return vals, wits


def _profile_lean(angles):
    # for very large spectra only the best grid basin per index is refined;
    # a tie between far-apart basins can then cost up to half a grid cell
    phases = _grid()
    h = TWO_PI / TOL.grid_n
    gvals, gargs = _kernels.profile_scan(angles, phases)
    n = angles.shape[0]
    vals = np.empty(n)
    wits = np.empty(n, dtype=complex)
    for i in range(n):
        t0 = float(gargs[i]) * h
        f = lambda t: _index_value(angles, i, t)
        t, v = _golden_min(f, t0 - h, t0 + h)
        if v > gvals[i]:
            v, t = float(gvals[i]), t0
        vals[i] = v
        wits[i] = complex(math.cos(t), math.sin(t))
    return vals, wits


def _ell_profile(angles):
    n = angles.shape[0]
    if n <= _DENSE_LIMIT:
        vals, wits = _profile_dense(angles)
    else:
        vals, wits = _profile_lean(angles)
    # each value is an independent minimum; tiny refinement noise can break
    # monotonicity at the 1e-12 level, so clip, but a real violation means a
    # missed basin and must not be papered over
    for i in range(1, n):
        if vals[i] > vals[i - 1] + 1e-9:
            raise NumericalDegeneracyError(
                f"profile refinement failed: value[{i}] exceeds value[{i - 1}]"
            )
        if vals[i] > vals[i - 1]:
            vals[i] = vals[i - 1]
    return vals, wits


def projective_profile(u, seed=0):
    """Full projective singular value profile of a unitary, with witnesses."""
    spec = spectrum_of(u, seed=seed)
    vals, wits = _ell_profile(spec.angles)
    return SpectralProfile("ell", vals, wits)


def projective_s_number(u, i, seed=0):
    """i-th projective singular value of u and a phase attaining it."""
    spec = spectrum_of(u, seed=seed)
    n = spec.n
    if not (0 <= i < n):
        raise IndexError(f"index {i} out of range for size {n}")
    angles = spec.angles
    phases = _grid()
    h = TWO_PI / TOL.grid_n
    if n <= _DENSE_LIMIT:
        mat = _kernels.sorted_grid_matrix(angles, phases)
        curve = mat[:, i]
    else:
        curve = _index_curve(angles, i, phases)
    v, t = _refine(lambda t: _index_value(angles, i, t), curve, h)
    return v, complex(math.cos(t), math.sin(t))


def projective_one_norm(u, seed=0):
    """min over unit lam of the trace-normalized one-norm of 1 - lam*u."""
    spec = spectrum_of(u, seed=seed)
    angles = spec.angles
    phases = _grid()
    h = TWO_PI / TOL.grid_n
    curve = _kernels.mean_curve(angles, phases)

    def f(t):
        return float(np.mean(np.abs(2.0 * np.sin(0.5 * (t + angles)))))

    v, t = _refine(f, curve, h)
    return v, complex(math.cos(t), math.sin(t))


def profile_mean(u, seed=0):
    """Mean of the projective profile values."""
    prof = projective_profile(u, seed=seed)
    return float(np.mean(prof.values))


def projective_rank(u, seed=0):
    """Least s with all profile values from index s on below the rank cutoff.

    For a unitary the last profile value always vanishes (some phase lands on
    an eigenvalue), so the result is at most n-1; a non-vanishing tail means
    the minimization went wrong and raises.
    """
    prof = projective_profile(u, seed=seed)
    v = prof.values
    if v[-1] > TOL.rank:
        raise NumericalDegeneracyError(
            f"profile tail {v[-1]:.3e} does not vanish"
        )
    above = np.nonzero(v > TOL.rank)[0]
    if above.shape[0] == 0:
        return 0
    return int(above[-1]) + 1


def rank_distance(x, y):
    """Normalized rank of x - y, counting singular values above the cutoff."""
    a = _as_square(x)
    b = _as_square(y)
    if a.shape != b.shape:
        raise DimensionError("shape mismatch")
    s = np.linalg.svd(a - b, compute_uv=False)
    k = int(np.count_nonzero(s > TOL.rank))
    return RankDistance(k, a.shape[0])


# ---------------------------------------------------------------------------
# diagonalization


def diagonalize_normal(u, seed=0):
    """Spectrum and eigenvector frame of a unitary matrix.

    Returns (spectrum, w) with w unitary, u = w diag(e^{i angles}) w*.  Works
    through a random Hermitian combination of u + u* and (u - u*)/i so
    eigenspaces for distinct angles separate; retries with fresh combinations
    if the reconstruction residual is too large.
    """
    if isinstance(u, CircleSpectrum):
        return u, np.eye(u.n, dtype=complex)
    rep = as_unitary(u)
    m = rep.matrix
    n = rep.n
    rng = np.random.default_rng(seed)
    hre = (m + m.conj().T) / 2.0
    him = (m - m.conj().T) / 2j
    last = None
    for _ in range(TOL.diag_retries):
        t = rng.uniform(0.0, TWO_PI)
        h = math.cos(t) * hre + math.sin(t) * him
        _, w = np.linalg.eigh(h)
        d = w.conj().T @ m @ w
        angles = np.angle(np.diag(d))
        rebuilt = (w * np.exp(1j * angles)[None, :]) @ w.conj().T
        residual = float(np.max(np.abs(rebuilt - m)))
        last = residual
        if residual <= TOL.diag_residual:
            order = np.argsort(angles)
            return CircleSpectrum(angles[order]), np.ascontiguousarray(w[:, order])
    raise NumericalDegeneracyError(
        f"diagonalization failed after {TOL.diag_retries} tries, "
        f"best residual {last:.3e}"
    )
