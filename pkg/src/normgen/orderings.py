"""Spectrum orderings and diagonal decompositions.

The generation machinery wants eigenvalues arranged so that adjacent gaps are
as large as possible (lexicographically maximal gap sequence) or so that all
prefix sums of the angles stay small (angle sum optimal ordering).  Both
orderings live here, together with the two commuting decompositions of a
diagonal unitary and the exact zero-sum phase centering.
"""

from dataclasses import dataclass
import math

import numpy as np

from .config import TOL
from .errors import DomainError, PreconditionError
from .spectral import (
    CircleSpectrum,
    TWO_PI,
    canon_angle,
    chord,
    projective_profile,
)


@dataclass(frozen=True)
class OptimalOrdering:
    """A reordering of a spectrum with lexicographically maximal gaps.

    diffs[i] is the chordal distance between neighbours i and i+1; sigma
    sorts the gap positions by decreasing gap; perm maps output positions to
    input positions.
    """

    angles: np.ndarray
    sigma: np.ndarray
    diffs: np.ndarray
    perm: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        d = np.asarray(self.diffs, dtype=float)
        s = np.asarray(self.sigma, dtype=np.int64)
        p = np.asarray(self.perm, dtype=np.int64)
        n = a.shape[0]
        if d.shape != (max(n - 1, 0),) or s.shape != d.shape or p.shape != a.shape:
            raise DomainError("inconsistent ordering fields")
        if n >= 2:
            if sorted(s.tolist()) != list(range(n - 1)):
                raise DomainError("sigma is not a permutation of the gap positions")
            if np.any(np.diff(d[s]) > 1e-12):
                raise DomainError("sigma does not sort the gaps")
        for arr in (a, d, s, p):
            arr.setflags(write=False)
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "diffs", d)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "perm", p)

    @property
    def n(self):
        return self.angles.shape[0]

    def spectrum(self):
        return CircleSpectrum(self.angles)

    def top_gap(self):
        return float(self.diffs[self.sigma[0]])


@dataclass(frozen=True)
class AngleSumOrdering:
    """Zero-sum reals reordered so every prefix sum is small."""

    values: np.ndarray
    sigma: np.ndarray
    prefix_max: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        s = np.asarray(self.sigma, dtype=np.int64)
        if v.shape != s.shape:
            raise DomainError("inconsistent ordering fields")
        v.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sigma", s)


def _tie_band(best):
    return TOL.tie_rel * max(best, 1.0)


def optimalize(spec, frontier_cap=256):
    """Reorder a spectrum so the adjacent-gap sequence is lexicographically
    maximal.

    Sequential greedy over prefixes with tie-set tracking: every prefix whose
    gap sequence ties the current best within TIE_TOL survives to the next
    position, deduplicated by (last angle, remaining multiset).  Exhaustive
    search over all orderings confirms the result for small n in the tests.
    """
    if not isinstance(spec, CircleSpectrum):
        spec = CircleSpectrum(spec)
    n = spec.n
    if n < 2:
        raise DomainError("need at least two eigenvalues to order gaps")
    angles = spec.angles

    def dedup_key(order, remaining):
        last = round(angles[order[-1]] / 1e-12)
        rest = tuple(sorted(round(angles[r] / 1e-12) for r in remaining))
        return last, rest

    # seed with every maximal-distance pair, both orientations
    best = -1.0
    frontier = []
    for i in range(n):
        di = chord(angles - angles[i])
        for j in range(n):
            if i == j:
                continue
            g = float(di[j])
            if g > best + _tie_band(best):
                best = g
                frontier = [((i, j), frozenset(range(n)) - {i, j})]
            elif g >= best - _tie_band(best):
                frontier.append(((i, j), frozenset(range(n)) - {i, j}))
    gaps = [best]
    seen = set()
    deduped = []
    for order, remaining in frontier:
        key = dedup_key(order, remaining)
        if key not in seen:
            seen.add(key)
            deduped.append((order, remaining))
    frontier = deduped[:frontier_cap]

    for _ in range(n - 2):
        best = -1.0
        nxt = []
        for order, remaining in frontier:
            rem = sorted(remaining)
            g_all = chord(angles[rem] - angles[order[-1]])
            for k, idx in enumerate(rem):
                g = float(g_all[k])
                if g > best + _tie_band(best):
                    best = g
                    nxt = [(order + (idx,), remaining - {idx})]
                elif g >= best - _tie_band(best):
                    nxt.append((order + (idx,), remaining - {idx}))
        gaps.append(best)
        seen = set()
        deduped = []
        for order, remaining in nxt:
            key = dedup_key(order, remaining)
            if key not in seen:
                seen.add(key)
                deduped.append((order, remaining))
        frontier = deduped[:frontier_cap]

    perm = np.asarray(frontier[0][0], dtype=np.int64)
    out = angles[perm]
    diffs = chord(out[:-1] - out[1:])
    sigma = np.argsort(-diffs, kind="stable")
    return OptimalOrdering(out, sigma, diffs, perm)


def angle_sum_optimalize(alphas):
    """Order zero-sum reals so every prefix sum is bounded by max |alpha|.

    Alternating greedy: start from the largest element, then append from the
    opposite-sign side (largest magnitudes first) until the running sum
    crosses zero, and switch sides; zeros go last.
    """
    a = np.asarray(alphas, dtype=float)
    if a.ndim != 1 or a.shape[0] == 0:
        raise DomainError("need a nonempty vector")
    residual = float(a.sum())
    if abs(residual) > 1e-10:
        raise PreconditionError(f"angle sum must vanish, got {residual:.3e}")
    if np.all(a == 0.0):
        order = np.arange(a.shape[0], dtype=np.int64)
        return AngleSumOrdering(a, order, 0.0)

    flip = a[np.argmax(np.abs(a))] < 0.0
    b = -a if flip else a
    pos = sorted(np.nonzero(b > 0)[0].tolist(), key=lambda i: -b[i])
    neg = sorted(np.nonzero(b < 0)[0].tolist(), key=lambda i: b[i])
    zeros = np.nonzero(b == 0)[0].tolist()

    order = [pos.pop(0)]
    total = b[order[0]]
    side_neg = True
    while pos or neg:
        src = neg if side_neg else pos
        while src:
            idx = src.pop(0)
            order.append(idx)
            total += b[idx]
            if (side_neg and total < 0.0) or (not side_neg and total > 0.0):
                break
        side_neg = not side_neg
    order.extend(zeros)

    order = np.asarray(order, dtype=np.int64)
    prefix_max = float(np.max(np.abs(np.cumsum(a[order]))))
    return AngleSumOrdering(a[order], order, prefix_max)


def torus_decompose(spec):
    """Commuting diagonal factors: a central one, then one new eigenvalue
    ratio per position, repeated to the end of the diagonal.

    Returns the factors as vectors of diagonal entries; their entrywise
    product is the input diagonal.
    """
    if not isinstance(spec, CircleSpectrum):
        spec = CircleSpectrum(spec)
    angles = spec.angles
    n = spec.n
    factors = [np.full(n, np.exp(1j * angles[0]), dtype=complex)]
    for i in range(1, n):
        vec = np.ones(n, dtype=complex)
        vec[i:] = np.exp(1j * (angles[i] - angles[i - 1]))
        factors.append(vec)
    return factors


def product_decompose(spec):
    """Commuting two-by-two block factors whose product is the input.

    Factor i carries the prefix eigenvalue product at position i and its
    conjugate at position i+1; requires the angle sum to vanish mod 2 pi so
    the last position closes up.
    """
    if not isinstance(spec, CircleSpectrum):
        spec = CircleSpectrum(spec)
    angles = spec.angles
    n = spec.n
    total = float(angles.sum())
    wrapped = canon_angle(total)
    if abs(wrapped) > 1e-10:
        raise PreconditionError(
            f"angle sum must vanish mod 2pi, residual {wrapped:.3e}"
        )
    factors = []
    prefix = np.cumsum(angles)
    for i in range(n - 1):
        vec = np.ones(n, dtype=complex)
        vec[i] = np.exp(1j * prefix[i])
        vec[i + 1] = np.exp(-1j * prefix[i])
        factors.append(vec)
    return factors


def center_phase(spec):
    """Global phase making the canonical angle sum exactly zero.

    Candidate phases shift the plain sum to each multiple of 2 pi; a counting
    argument guarantees one of them cancels the wrap corrections, so the
    canonicalized angles of the result sum to zero up to accumulated float
    noise.  Returns (centered spectrum, applied phase angle).
    """
    if not isinstance(spec, CircleSpectrum):
        spec = CircleSpectrum(spec)
    angles = spec.angles
    n = spec.n
    s = float(angles.sum())
    best = None
    for j in range(n):
        t = (-s + TWO_PI * j) / n
        cand = canon_angle(angles + t)
        r = abs(float(cand.sum()))
        if best is None or r < best[0]:
            best = (r, t, cand)
    r, t, cand = best
    if r > 1e-9:
        raise PreconditionError(f"phase centering failed, residual {r:.3e}")
    return CircleSpectrum(cand), canon_angle(t)


def gap_sandwich_check(opt, tol=None):
    """Certify the two-sided bounds between gaps and projective values.

    For an optimally ordered diagonal: half the gap at sigma(2i) bounds the
    i-th projective value from below, and the distance profile to the last
    eigenvalue bounds it from above by the gap at sigma(i).
    """
    if tol is None:
        tol = 2.0 * TOL.ell
    n = opt.n
    prof = projective_profile(opt.spectrum())
    ell = prof.values
    dists = np.sort(chord(opt.angles - opt.angles[n - 1]))[::-1]
    rows = []
    ok = True
    for i in range(n - 1):
        lower = 0.5 * opt.diffs[opt.sigma[2 * i]] if 2 * i <= n - 2 else None
        upper = float(opt.diffs[opt.sigma[i]])
        mu = float(dists[i])
        good = ell[i] <= mu + tol and mu <= upper + tol
        if lower is not None:
            good = good and lower <= ell[i] + tol
        ok = ok and good
        rows.append(
            {
                "index": i,
                "lower": lower,
                "ell": float(ell[i]),
                "mu_at_last": mu,
                "upper": upper,
                "ok": bool(good),
            }
        )
    return {"ok": bool(ok), "rows": rows}


def leading_gap_check(opt):
    """Report whether twice the leading angle gap dominates every angle.

    Evaluated on the representative as given (normally centered first);
    failures are reported, not raised, since the bound is sensitive to the
    choice of representative.
    """
    lhs = 2.0 * abs(float(opt.angles[0]) - float(opt.angles[1]))
    rhs = float(np.max(np.abs(opt.angles)))
    return {"holds": bool(lhs >= rhs - 1e-12), "lhs": lhs, "rhs": rhs}
