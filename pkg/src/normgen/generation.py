"""Constructive certificates for bounded normal generation.

Given unitaries u and v, the generators below emit an explicit ordered list
of conjugates of v or its inverse whose product equals u up to a global
phase.  The construction decomposes the target into commuting two-by-two
block factors, realizes each factor by a class-angle walk whose generator is
a commutator of v with a block rotation, and charges every conjugate against
a stated budget.  Certificates carry everything needed for an independent
recheck; verify_certificate redoes the multiplication and the bookkeeping
from scratch and reports rather than raises.

Two conventions keep the walks honest.  First, a full block swap can leave
the commutator class beyond a quarter turn, where fixed-length walks lose
reachability; a partial rotation caps the class at pi/2 instead, from which
any block angle is reachable in two steps.  Second, walks always spend their
exact step budget, so parallel strands driven by one shared commutator stay
aligned for free.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .config import TOL
from .errors import (
    BudgetInfeasibleError,
    CertificateFormatError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    HypothesisError,
    NumericalDegeneracyError,
    PreconditionError,
    ValidationError,
)
from .orderings import angle_sum_optimalize, center_phase, optimalize
from .spectral import (
    UnitaryRep,
    as_unitary,
    canon_angle,
    diagonalize_normal,
    matrix_from_json,
    matrix_to_json,
    projective_one_norm,
    projective_profile,
    projective_s_number,
    rank_distance,
    unitarity_defect,
)
from .su2 import conjugator_to_reference, rotation_class_angle, su2_walk

__all__ = [
    "CertStep",
    "Certificate",
    "HypothesisReport",
    "certificate_product",
    "counterexample_pair",
    "generate_block",
    "generate_full",
    "generate_rank_dependent",
    "generate_rank_independent",
    "generate_simultaneous",
    "hypothesis_check",
    "swap_commutator",
    "theorem_budgets",
    "verify_certificate",
]

THEOREM_TAGS = ("rank_dep", "rank_indep", "full_gen", "pipeline", "broise_kernel")

CERT_VERSION = "normgen-cert/1"

# conjugating by this flips diag(a, conj(a)) to diag(conj(a), a)
_FLIP = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


# ---------------------------------------------------------------------------
# certificate container


@dataclass(frozen=True)
class CertStep:
    """One conjugate in a certificate: contributes g @ base^e @ g*.

    Deliberately unvalidated so that damaged certificates can still be
    loaded and then fail verification instead of failing to parse.
    """

    g: np.ndarray
    e: int

    def __post_init__(self):
        m = np.asarray(self.g, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "g", m)
        object.__setattr__(self, "e", int(self.e))

    def to_json(self):
        return {"g": matrix_to_json(self.g), "e": self.e}

    @classmethod
    def from_json(cls, obj):
        try:
            g = matrix_from_json(obj["g"], what="step conjugator")
            e = int(obj["e"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed step: {exc}") from exc
        return cls(g, e)


@dataclass(frozen=True)
class Certificate:
    """Explicit product of conjugates of base^{+-1} realizing target.

    The product of g @ base^e @ g* over steps, in order, equals target up to
    one global phase.  claimed_budget is the theorem-level bound the length
    is charged against; params and metadata record how the steps were found.
    """

    target: np.ndarray
    base: np.ndarray
    steps: tuple
    claimed_budget: int
    theorem: str
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.target, dtype=complex)
        b = np.asarray(self.base, dtype=complex)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise DimensionError(f"target must be square, got {t.shape}")
        if b.shape != t.shape:
            raise DimensionError(
                f"base shape {b.shape} does not match target {t.shape}"
            )
        if self.theorem not in THEOREM_TAGS:
            raise ValidationError(f"unknown theorem tag {self.theorem!r}")
        budget = int(self.claimed_budget)
        if budget < 0:
            raise ValidationError("claimed budget must be non-negative")
        steps = tuple(self.steps)
        for st in steps:
            if not isinstance(st, CertStep):
                raise ValidationError("steps must be CertStep instances")
        t.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "claimed_budget", budget)
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def n(self):
        return self.target.shape[0]

    def __len__(self):
        return len(self.steps)

    def product(self):
        return certificate_product(self.base, self.steps)

    def to_json(self):
        out = {
            "version": CERT_VERSION,
            "target": matrix_to_json(self.target),
            "base": matrix_to_json(self.base),
            "steps": [st.to_json() for st in self.steps],
            "claimed_budget": self.claimed_budget,
            "theorem": self.theorem,
            "params": dict(self.params),
            "metadata": _json_safe(self.metadata),
        }
        if "s0" in self.metadata:
            out["s0"] = int(self.metadata["s0"])
        return out

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise CertificateFormatError("certificate must be an object")
        if obj.get("version") != CERT_VERSION:
            raise CertificateFormatError(
                f"unsupported certificate version {obj.get('version')!r}"
            )
        try:
            target = matrix_from_json(obj["target"], what="target")
            base = matrix_from_json(obj["base"], what="base")
            steps = tuple(CertStep.from_json(s) for s in obj["steps"])
            budget = int(obj["claimed_budget"])
            theorem = obj["theorem"]
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc
        params = obj.get("params") or {}
        metadata = dict(obj.get("metadata") or {})
        if "s0" in obj:
            metadata.setdefault("s0", int(obj["s0"]))
        return cls(target, base, steps, budget, theorem, params, metadata)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    return obj


def certificate_product(base, steps):
    """Multiply out g @ base^e @ g* over the steps, left to right."""
    b = np.asarray(base, dtype=complex)
    binv = b.conj().T
    out = np.eye(b.shape[0], dtype=complex)
    for st in steps:
        g = np.asarray(st.g, dtype=complex)
        core = b if st.e == 1 else binv
        out = out @ (g @ core @ g.conj().T)
    return out


def _trace_residual(a, b):
    """Projective distance sqrt(2 - 2|tr(a* b)|/n), clamped at zero."""
    n = a.shape[0]
    t = abs(np.trace(a.conj().T @ b)) / n
    return math.sqrt(max(0.0, 2.0 - 2.0 * t))


# ---------------------------------------------------------------------------
# budgets and hypotheses


def _ceil_div(num, den):
    f = Fraction(num) / Fraction(den)
    return -((-f.numerator) // f.denominator)


def theorem_budgets(m, n=None, s=None, ell=None, coeff=None):
    """Conjugate-count budgets of the various generation routes.

    Matrix routes need the size n: the gap-walk route costs 8*m*n and the
    block-parallel route 24*m*ceil(n/s).  Trace routes read s as a fraction:
    the rational pipeline costs 48*m*ceil(1/s), the kernel route through
    symmetries 18432*m*ceil(1/s), and the general route 589824*m*ceil(1/s).
    With a length value ell the asymptotic scaling coeff*|log ell|/ell is
    reported as well.
    """
    m = int(m)
    if m <= 0:
        raise DomainError("multiplier must be positive")
    out = {}
    if s is not None:
        s_frac = Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(10**9)
        if s_frac <= 0:
            raise DomainError("block parameter must be positive")
        if n is not None:
            n = int(n)
            out["rank_dependent"] = 8 * m * n
            out["rank_independent"] = 24 * m * _ceil_div(n, s_frac)
        inv = _ceil_div(1, s_frac)
        out["pipeline"] = 48 * m * inv
        out["kernel_factor"] = 18432 * m * inv
        out["general_factor"] = 589824 * m * inv
    elif n is not None:
        out["rank_dependent"] = 8 * m * int(n)
    if ell is not None:
        ell = float(ell)
        if ell <= 0:
            raise DomainError("length value must be positive")
        c = 1.0 if coeff is None else float(coeff)
        out["length_scaling"] = c * abs(math.log(ell)) / ell
    return out


@dataclass(frozen=True)
class HypothesisReport:
    """Feasibility of the generation hypothesis for a pair (u, v).

    slack[t] is ell_0(u) - m * ell_t(v); the hypothesis asks every slack up
    to index s-1 to be non-positive.  max_feasible_s is the largest block
    count the given m supports, min_feasible_m the smallest multiplier the
    requested s admits (None when no multiplier works).
    """

    m: int
    s: int
    slacks: tuple
    satisfied: bool
    max_feasible_s: int
    min_feasible_m: object

    def to_json(self):
        return {
            "m": self.m,
            "s": self.s,
            "slacks": [float(x) for x in self.slacks],
            "satisfied": bool(self.satisfied),
            "max_feasible_s": self.max_feasible_s,
            "min_feasible_m": self.min_feasible_m,
        }


def hypothesis_check(u, v, m, s, seed=0):
    """Check ell_0(u) <= m * ell_t(v) for t < s, with slack reporting."""
    m = int(m)
    s = int(s)
    if m <= 0 or s <= 0:
        raise DomainError("multiplier and block count must be positive")
    ell_u = projective_s_number(u, 0, seed=seed)[0]
    prof_v = projective_profile(v, seed=seed).values
    n = prof_v.shape[0]
    if s > n:
        raise DomainError(f"block count {s} exceeds size {n}")
    slacks = tuple(float(ell_u - m * prof_v[t]) for t in range(s))
    satisfied = all(x <= TOL.hyp_slack for x in slacks)
    feas = 0
    for t in range(n):
        if ell_u - m * prof_v[t] <= TOL.hyp_slack:
            feas = t + 1
        else:
            break
    floor = float(prof_v[s - 1])
    if ell_u <= TOL.hyp_slack:
        min_m = 1
    elif floor <= TOL.rank:
        min_m = None
    else:
        min_m = max(1, int(math.ceil((ell_u - TOL.hyp_slack) / floor)))
    return HypothesisReport(m, s, slacks, satisfied, feas, min_m)


# ---------------------------------------------------------------------------
# commutator plumbing


def _diag_angles(x, what):
    rep = as_unitary(x, what=what)
    m = rep.matrix
    off = m - np.diag(np.diagonal(m))
    if float(np.max(np.abs(off))) > 1e-9:
        raise PreconditionError(f"{what} must be diagonal")
    return np.angle(np.diagonal(m)), rep


def _embed2(n, j, block):
    out = np.eye(n, dtype=complex)
    out[j : j + 2, j : j + 2] = block
    return out


def _block_rotation(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, s], [-s, c]], dtype=complex)


def swap_commutator(v, j):
    """Commutator of a diagonal unitary with the swap at (j, j+1).

    Returns (commutator, fragment, block_angle): the commutator equals the
    two-step fragment product v * (g v* g*), supported on the block where it
    rotates by the angle gap theta_j - theta_{j+1}.
    """
    angles, rep = _diag_angles(v, "base")
    n = rep.n
    j = int(j)
    if not (0 <= j <= n - 2):
        raise DomainError(f"block position {j} out of range for size {n}")
    g = np.eye(n, dtype=complex)
    g[j, j], g[j + 1, j + 1] = 0.0, 0.0
    g[j, j + 1], g[j + 1, j] = 1.0, 1.0
    m = rep.matrix
    comm = m @ g @ m.conj().T @ g.conj().T
    fragment = (CertStep(np.eye(n, dtype=complex), 1), CertStep(g, -1))
    check = certificate_product(m, fragment)
    if float(np.max(np.abs(check - comm))) > 1e-12:
        raise NumericalDegeneracyError("commutator fragment drifted")
    block_angle = canon_angle(angles[j] - angles[j + 1])
    return comm, fragment, block_angle


@dataclass(frozen=True)
class _Strand:
    """One block walk inside a shared commutator schedule."""

    phi: float
    target: int
    source: int
    rotation: np.ndarray
    commutator: np.ndarray
    theta: float
    frames: tuple


def _plan_strand(phi, target, source, v_angles, m_eff, slack=1e-9):
    """Choose the block rotation and walk for one factor.

    The commutator of v with a rotation by t in the source block has class
    angle c(t) with cos c = 1 - sin(t)^2 (1 - cos gap); a full swap gives the
    gap itself, and when the gap passes a quarter turn a partial rotation
    pins the class to pi/2, from which two steps reach any angle.
    """
    delta = canon_angle(v_angles[source] - v_angles[source + 1])
    beta = abs(delta)
    if beta <= 1e-12:
        raise DegenerateInputError(
            f"source gap at position {source} vanishes"
        )
    if beta <= 0.5 * math.pi + 1e-12:
        t = 0.5 * math.pi
    else:
        t = math.asin(min(1.0, 1.0 / math.sqrt(1.0 - math.cos(delta))))
    rot = _block_rotation(t)
    vblk = np.diag(np.exp(1j * v_angles[source : source + 2]))
    comm = vblk @ rot @ vblk.conj().T @ rot.conj().T
    theta = rotation_class_angle(comm)
    cap = m_eff * theta
    mag = abs(phi)
    if mag > cap:
        if mag > cap + slack:
            raise BudgetInfeasibleError(
                f"block angle {phi:.6f} needs more than {m_eff} steps of "
                f"class {theta:.6f}"
            )
        mag = cap
    phi_w = math.copysign(mag, phi) if phi != 0.0 else 0.0
    steps = su2_walk(phi_w, theta, m_eff)
    ref = conjugator_to_reference(comm, theta)
    ref_h = ref.conj().T
    sign = steps[0].exponent
    frames = []
    for st in steps:
        y = st.conjugator @ ref_h if sign == 1 else st.conjugator @ _FLIP @ ref_h
        frames.append(y)
    # closed-loop guard: the frames must reassemble the block target exactly
    prod = np.eye(2, dtype=complex)
    for y in frames:
        prod = prod @ (y @ comm @ y.conj().T)
    want = np.diag(np.exp(1j * np.array([phi_w, -phi_w])))
    if float(np.max(np.abs(prod - want))) > 1e-9:
        raise NumericalDegeneracyError("strand walk drifted off its target")
    return _Strand(phi_w, target, source, rot, comm, theta, tuple(frames))


def _alignment(n, strands):
    """Permutation sending each source block onto its target block."""
    src, dst = [], []
    for st in strands:
        src.extend((st.source, st.source + 1))
        dst.extend((st.target, st.target + 1))
    if src == dst:
        return None
    rest_src = sorted(set(range(n)) - set(src))
    rest_dst = sorted(set(range(n)) - set(dst))
    p = np.zeros((n, n), dtype=complex)
    for a, b in zip(src, dst):
        p[b, a] = 1.0
    for a, b in zip(rest_src, rest_dst):
        p[b, a] = 1.0
    return p


def _shared_steps(n, strands, m_eff):
    """Expand parallel strand walks into 2*m_eff ambient conjugation steps."""
    if not strands:
        return []
    gmulti = np.eye(n, dtype=complex)
    for st in strands:
        gmulti[st.source : st.source + 2, st.source : st.source + 2] = st.rotation
    p = _alignment(n, strands)
    out = []
    for q in range(m_eff):
        y = np.eye(n, dtype=complex)
        for st in strands:
            y[st.source : st.source + 2, st.source : st.source + 2] = st.frames[q]
        if p is not None:
            y = p @ y
        out.append(CertStep(y, 1))
        out.append(CertStep(y @ gmulti, -1))
    return out


def _check_separated(positions, what):
    seen = sorted(int(p) for p in positions)
    for a, b in zip(seen, seen[1:]):
        if b - a < 2:
            raise DomainError(
                f"layout: {what} blocks {a} and {b} overlap, need separation >= 2"
            )


# ---------------------------------------------------------------------------
# lemma-level generators on diagonal inputs


def generate_block(u_i, v, m, j):
    """Steps moving one two-by-two block factor using the source gap at j.

    u_i must be diagonal with a single conjugate pair of nontrivial entries
    at adjacent positions; v must be diagonal.  Emits at most 2*m steps whose
    product is exactly the factor; the identity factor yields no steps.
    """
    m = int(m)
    if m <= 0 or m % 2 != 0:
        raise DomainError("step multiplier must be a positive even integer")
    fangles, frep = _diag_angles(u_i, "block factor")
    vangles, vrep = _diag_angles(v, "base")
    n = frep.n
    if vrep.n != n:
        raise DimensionError("factor and base sizes differ")
    j = int(j)
    if not (0 <= j <= n - 2):
        raise DomainError(f"source block {j} out of range for size {n}")
    live = [int(k) for k in np.nonzero(np.abs(canon_angle(fangles)) > 1e-12)[0]]
    if not live:
        return []
    if len(live) != 2 or live[1] != live[0] + 1:
        raise PreconditionError(
            "factor must be supported on one adjacent block"
        )
    i = live[0]
    phi = canon_angle(fangles[i])
    if abs(canon_angle(fangles[i] + fangles[i + 1])) > 1e-9:
        raise PreconditionError("block entries must be conjugate phases")
    delta = canon_angle(vangles[j] - vangles[j + 1])
    if abs(phi) > m * abs(delta) + 1e-9:
        raise BudgetInfeasibleError(
            f"|angle| {abs(phi):.6f} exceeds {m} times the gap {abs(delta):.6f}"
        )
    strand = _plan_strand(phi, i, j, vangles, m)
    return _shared_steps(n, [strand], m)


def generate_simultaneous(u, v, sources, targets, m):
    """Steps moving several separated block factors with one shared schedule.

    u and v are diagonal; the angle sum of u must vanish so its prefix
    products close up.  targets[k] picks the block factor of u at that
    position, sources[k] the gap of v driving it.  All walks share one
    commutator per step, so the whole batch costs at most 2*m steps.
    """
    m = int(m)
    if m <= 0 or m % 2 != 0:
        raise DomainError("step multiplier must be a positive even integer")
    uangles, urep = _diag_angles(u, "target")
    vangles, vrep = _diag_angles(v, "base")
    n = urep.n
    if vrep.n != n:
        raise DimensionError("target and base sizes differ")
    sources = [int(x) for x in sources]
    targets = [int(x) for x in targets]
    if len(sources) != len(targets) or not sources:
        raise DomainError("need matching nonempty source and target lists")
    for pos in sources + targets:
        if not (0 <= pos <= n - 2):
            raise DomainError(f"block position {pos} out of range for size {n}")
    _check_separated(sources, "source")
    _check_separated(targets, "target")
    total = canon_angle(float(uangles.sum()))
    if abs(total) > 1e-9:
        raise PreconditionError(
            f"angle sum must vanish mod 2pi, residual {total:.3e}"
        )
    prefix = np.cumsum(uangles)
    strands = []
    for i, j in zip(targets, sources):
        phi = canon_angle(prefix[i])
        if abs(phi) <= 1e-12:
            continue
        delta = canon_angle(vangles[j] - vangles[j + 1])
        if abs(phi) > m * abs(delta) + 1e-9:
            raise BudgetInfeasibleError(
                f"prefix angle {phi:.6f} at block {i} exceeds {m} times "
                f"the gap at {j}"
            )
        strands.append(_plan_strand(phi, i, j, vangles, m))
    return _shared_steps(n, strands, m)


# ---------------------------------------------------------------------------
# theorem-level generators


def _chord_diameter(angles):
    vals = np.exp(1j * np.asarray(angles, dtype=float))
    d = np.abs(vals[:, None] - vals[None, :])
    return float(d.max())


def _is_central(angles):
    return _chord_diameter(angles) <= 1e-8


def _best_centering(spec):
    """Sum-zero representative with the smallest largest angle modulus.

    All candidates shift by the same phase up to roots of unity; the one
    whose branch cut falls inside the widest spectral gap keeps every angle
    modulus at most the covering arc, which the walk budget analysis needs.
    """
    angles = spec.angles
    n = spec.n
    s = float(angles.sum())
    best = None
    for k in range(n):
        t = (-s + 2.0 * math.pi * k) / n
        cand = canon_angle(angles + t)
        resid = abs(float(cand.sum()))
        if resid > 1e-9:
            continue
        peak = float(np.max(np.abs(cand)))
        if best is None or peak < best[0] - 1e-15:
            best = (peak, t, cand)
    if best is None:
        # counting argument: some shift always cancels the wrap corrections
        centered, t = center_phase(spec)
        return centered.angles, float(t)
    return best[2], canon_angle(best[1])


def _prepare_pair(u, v, seed=0):
    urep = as_unitary(u, what="target")
    vrep = as_unitary(v, what="base")
    if urep.n != vrep.n:
        raise DimensionError("target and base sizes differ")
    uspec, uframe = diagonalize_normal(urep, seed=seed)
    vspec, vframe = diagonalize_normal(vrep, seed=seed)
    return urep, vrep, uspec, uframe, vspec, vframe


def _walk_certificate(urep, vrep, uspec, uframe, vspec, vframe, mult, budget,
                      theorem, params, metadata, sources_ranked=None,
                      chunk=1):
    """Shared assembly for the theorem generators.

    Factors the centered, prefix-ordered target into two-by-two blocks and
    walks them in batches against the chosen source gaps of the optimally
    ordered base, then dresses every step with the eigenbases.
    """
    n = urep.n
    centered, phase = _best_centering(uspec)
    order = angle_sum_optimalize(centered)
    theta = order.values
    aframe = uframe[:, order.sigma]
    opt = optimalize(vspec)
    gamma = opt.angles
    bframe = vframe[:, opt.perm]

    if sources_ranked is None:
        sources_ranked = [int(opt.sigma[0])]
    prefix = np.cumsum(theta)
    live = [f for f in range(n - 1) if abs(canon_angle(prefix[f])) > 1e-12]
    evens = [f for f in live if f % 2 == 0]
    odds = [f for f in live if f % 2 == 1]
    batches = []
    for group in (evens, odds):
        for k in range(0, len(group), chunk):
            batches.append(group[k : k + chunk])
    steps = []
    for batch in batches:
        strands = []
        for rank, f in enumerate(batch):
            j = sources_ranked[min(rank, len(sources_ranked) - 1)]
            phi = canon_angle(prefix[f])
            strands.append(_plan_strand(phi, f, j, gamma, mult))
        steps.extend(_shared_steps(n, strands, mult))
    if len(steps) > budget:
        raise BudgetInfeasibleError(
            f"construction used {len(steps)} conjugates, over budget {budget}"
        )
    bh = bframe.conj().T
    dressed = tuple(
        CertStep(aframe @ st.g @ bh, st.e) for st in steps
    )
    cert = Certificate(
        urep.matrix,
        vrep.matrix,
        dressed,
        budget,
        theorem,
        params,
        {**metadata, "centering_phase": float(phase)},
    )
    resid = _trace_residual(cert.product(), cert.target)
    if resid > 0.5 * TOL.eq_tol(len(dressed)):
        raise NumericalDegeneracyError(
            f"assembled certificate residual {resid:.3e} too large"
        )
    return cert


def generate_rank_dependent(u, v, m, seed=0):
    """Certificate with at most 8*m*n conjugates via single-gap walks.

    Requires ell_0(u) <= m * ell_0(v).  Every block factor of the target
    walks against the widest gap of the base with multiplier 4m, costing 8m
    conjugates per factor over at most n-1 factors.
    """
    m = int(m)
    if m <= 0:
        raise DomainError("multiplier must be positive")
    urep, vrep, uspec, uframe, vspec, vframe = _prepare_pair(u, v, seed=seed)
    n = urep.n
    budget = 8 * m * n
    if _is_central(uspec.angles):
        return Certificate(
            urep.matrix, vrep.matrix, (), budget, "rank_dep",
            {"m": m, "s": None, "n": n}, {"trivial_target": True},
        )
    if _is_central(vspec.angles):
        raise DegenerateInputError("base is central and generates nothing")
    ell_u = projective_s_number(uspec, 0)[0]
    ell_v = projective_s_number(vspec, 0)[0]
    if ell_u > m * ell_v + TOL.hyp_slack:
        raise BudgetInfeasibleError(
            f"ell_0(target) {ell_u:.6f} exceeds {m} * ell_0(base) {ell_v:.6f}"
        )
    return _walk_certificate(
        urep, vrep, uspec, uframe, vspec, vframe,
        mult=4 * m, budget=budget, theorem="rank_dep",
        params={"m": m, "s": None, "n": n},
        metadata={"walk_multiplier": 4 * m, "even_rounding": "4m is even"},
    )


def generate_rank_independent(u, v, m, s, seed=0):
    """Certificate with at most 24*m*ceil(n/s) conjugates via parallel walks.

    Requires the hypothesis ell_0(u) <= m * ell_t(v) for t < s.  Factors are
    split into even and odd positions and walked in batches of floor(s/2)
    against separated wide gaps of the base, each batch sharing one
    commutator schedule.  s = 1 falls back to the single-gap construction.
    """
    m = int(m)
    s = int(s)
    if m <= 0:
        raise DomainError("multiplier must be positive")
    urep, vrep, uspec, uframe, vspec, vframe = _prepare_pair(u, v, seed=seed)
    n = urep.n
    if not (1 <= s <= (n - 1) // 2 + 1):
        raise DomainError(
            f"block count {s} out of range for size {n}"
        )
    budget = 24 * m * _ceil_div(n, s)
    if _is_central(uspec.angles):
        return Certificate(
            urep.matrix, vrep.matrix, (), budget, "rank_indep",
            {"m": m, "s": s, "n": n}, {"trivial_target": True},
        )
    if _is_central(vspec.angles):
        raise DegenerateInputError("base is central and generates nothing")
    report = hypothesis_check(uspec, vspec, m, s)
    if not report.satisfied:
        raise HypothesisError(
            "generation hypothesis fails; see attached report", report
        )
    if s == 1:
        inner = _walk_certificate(
            urep, vrep, uspec, uframe, vspec, vframe,
            mult=4 * m, budget=budget, theorem="rank_indep",
            params={"m": m, "s": 1, "n": n},
            metadata={"walk_multiplier": 4 * m, "fallback": "single_gap"},
        )
        return inner
    opt = optimalize(vspec)
    candidates = sorted(int(opt.sigma[t]) for t in range(s))
    chosen = []
    last = None
    for pos in candidates:
        if last is None or pos - last >= 2:
            chosen.append(pos)
            last = pos
    rank_of = {int(p): r for r, p in enumerate(opt.sigma)}
    chosen.sort(key=lambda p: rank_of[p])
    chunk = max(1, s // 2)
    chosen = chosen[:chunk]
    return _walk_certificate(
        urep, vrep, uspec, uframe, vspec, vframe,
        mult=4 * m, budget=budget, theorem="rank_indep",
        params={"m": m, "s": s, "n": n},
        metadata={
            "walk_multiplier": 4 * m,
            "even_block_count": 2 * (s // 2),
            "even_rounding": "batch width floor(s/2), 4m walks",
        },
        sources_ranked=chosen,
        chunk=len(chosen),
    )


def generate_full(u, v, seed=0):
    """Certificate with at most 8*n*ceil(2/ell_0(v)) conjugates.

    Works for every noncentral base: ell_0 of any unitary is at most 2, so
    the multiplier ceil(2/ell_0(v)) always satisfies the single-gap
    hypothesis.
    """
    urep, vrep, uspec, uframe, vspec, vframe = _prepare_pair(u, v, seed=seed)
    n = urep.n
    ell_v = projective_s_number(vspec, 0)[0]
    if ell_v <= TOL.rank:
        raise DegenerateInputError(
            "base has vanishing projective length and generates nothing"
        )
    m = int(math.ceil(2.0 / ell_v - 1e-12))
    budget = 8 * m * n
    if _is_central(uspec.angles):
        return Certificate(
            urep.matrix, vrep.matrix, (), budget, "full_gen",
            {"m": m, "s": None, "n": n}, {"trivial_target": True},
        )
    cert = _walk_certificate(
        urep, vrep, uspec, uframe, vspec, vframe,
        mult=4 * m, budget=budget, theorem="full_gen",
        params={"m": m, "s": None, "n": n},
        metadata={
            "walk_multiplier": 4 * m,
            "derived_multiplier": f"ceil(2/{ell_v:.6f})",
        },
    )
    return cert


# ---------------------------------------------------------------------------
# verification


def _profile_of_matrix(mat, seed=0):
    spec, _ = diagonalize_normal(np.asarray(mat, dtype=complex), seed=seed)
    return spec, projective_profile(spec).values


def verify_certificate(cert, seed=0, tol=None):
    """Recheck a certificate from scratch; reports and never raises.

    Checks unitarity of the inputs and every conjugator, conjugacy of each
    step core to the base or its inverse by spectrum, the recomputed product
    against the target up to one phase, the length against the budget, the
    easy-direction profile inequality, and the one-norm lower bound on the
    length.  tol overrides the step-count-scaled product tolerance.
    """
    report = {
        "version": "normgen-report/1",
        "pass": False,
        "checks": {},
        "length": None,
        "budget": None,
        "residual": None,
        "tolerance": None,
    }
    checks = report["checks"]
    try:
        target = np.asarray(cert.target, dtype=complex)
        base = np.asarray(cert.base, dtype=complex)
        steps = tuple(cert.steps)
        n = target.shape[0]
        k = len(steps)
        report["length"] = k
        report["budget"] = int(cert.claimed_budget)
        checks["inputs_unitary"] = bool(
            unitarity_defect(target) <= TOL.unitarity
            and unitarity_defect(base) <= TOL.unitarity
        )
        ok_steps = True
        ok_conj = True
        base_angles = canon_angle(np.angle(np.linalg.eigvals(base)))
        # sort eigenangles from a cut inside the widest spectral gap of the
        # base, so a roundoff-perturbed eigenvalue near the cut (e.g. -1 on
        # the (-pi, pi] branch) cannot jump to the other end of the sort
        srt = np.sort(base_angles)
        gaps = np.diff(np.r_[srt, srt[0] + 2.0 * np.pi])
        widest = int(np.argmax(gaps))
        cut = srt[widest] + gaps[widest] / 2.0
        want_fwd = np.sort(np.mod(base_angles - cut, 2.0 * np.pi))
        want_adj = np.sort(np.mod(-base_angles + cut, 2.0 * np.pi))
        for st in steps:
            g = np.asarray(st.g, dtype=complex)
            if g.shape != (n, n) or st.e not in (-1, 1):
                ok_steps = False
                continue
            if unitarity_defect(g) > TOL.unitarity:
                ok_steps = False
            core = base if st.e == 1 else base.conj().T
            want = want_fwd if st.e == 1 else want_adj
            off = cut if st.e == 1 else -cut
            raw = np.angle(np.linalg.eigvals(g @ core @ g.conj().T))
            got = np.sort(np.mod(raw - off, 2.0 * np.pi))
            if float(np.max(np.abs(got - want))) > 1e-8:
                ok_conj = False
        checks["steps_unitary"] = bool(ok_steps)
        checks["step_conjugacy"] = bool(ok_conj)
        prod = certificate_product(base, steps)
        resid = _trace_residual(prod, target)
        tol = TOL.eq_tol(k) if tol is None else float(tol)
        report["residual"] = float(resid)
        report["tolerance"] = float(tol)
        checks["product"] = bool(resid <= tol)
        checks["length"] = bool(k <= cert.claimed_budget)
        tspec, tprof = _profile_of_matrix(target, seed=seed)
        bspec, bprof = _profile_of_matrix(base, seed=seed)
        ok_easy = True
        if k == 0:
            ok_easy = bool(tprof[0] <= 1e-7)
        else:
            for i in range(n):
                if k * i > n - 1:
                    break
                lhs = tprof[min(k * i, n - 1)]
                if lhs > k * bprof[i] + 1e-7:
                    ok_easy = False
        checks["easy_direction"] = bool(ok_easy)
        ell_t = projective_one_norm(tspec)[0]
        ell_b = projective_one_norm(bspec)[0]
        checks["lower_bound"] = bool(k * ell_b >= ell_t - 1e-6)
        report["pass"] = all(checks.values())
    except Exception as exc:  # noqa: BLE001 - verification must not raise
        checks["exception"] = False
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["pass"] = False
    return report


# ---------------------------------------------------------------------------
# obstruction


def counterexample_pair(n, lam=None, mu=None):
    """Pair with small projective values needing at least n-1 conjugates.

    Both matrices are scalar except for one balancing entry, so every
    conjugate of the base is a rank-one perturbation of a scalar and k of
    them cannot fix more than k eigenvalues of the target.  Generic phases
    (defaults with irrational ratios) keep the obstruction alive, which the
    block-count feasibility report reflects.
    """
    n = int(n)
    if n < 2:
        raise DomainError("need size at least 2")
    if lam is None:
        lam = complex(np.exp(1j * math.sqrt(2.0)))
    if mu is None:
        mu = complex(np.exp(1j * math.sqrt(3.0)))
    lam = complex(lam)
    mu = complex(mu)
    for z, name in ((lam, "lam"), (mu, "mu")):
        if abs(abs(z) - 1.0) > 1e-12:
            raise DomainError(f"{name} must lie on the unit circle")
    u = np.diag([lam ** (-(n - 1))] + [lam] * (n - 1)).astype(complex)
    v = np.diag([mu ** (-(n - 1))] + [mu] * (n - 1)).astype(complex)
    aligned = u * (lam ** (n - 1))
    dr = rank_distance(aligned, np.eye(n, dtype=complex))
    return {
        "u": UnitaryRep(u),
        "v": UnitaryRep(v),
        "lower_bound": n - 1,
        "aligned_rank_distance": dr,
        "lam": lam,
        "mu": mu,
    }
