"""Periodic points, multiplier classification, and Koenigs linearization.

The all-roots solver is an Aberth-Ehrlich simultaneous iteration with
deterministic initial placement and a Newton polish, so every caller
(periodic point enumeration, critical points, preimage steps) resolves
roots the same way.

The linearizer phi conjugates the map to w -> lambda*w near a repelling
fixed point a, normalized phi(a) = 0, phi'(a) = 1.  The direct Koenigs
limit lambda^n (g^n(z) - a) multiplies rounding noise of the inverse
branch g by lambda^n, which stalls around 1e-9 in double precision, so
the limit is evaluated in extended (mpmath) precision and rounded on
return.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    ConfigError,
    ConstructionError,
    DomainError,
    PreconditionError,
    RootFindingError,
)
from .maps import (
    RationalFunction,
    RationalMap,
    compose,
    poly_eval,
    poly_mul,
    poly_sub,
    poly_trim,
    quadratic_epsilon,
)

SUPERATTRACTING_TOL = 1e-9
PARABOLIC_TOL = 1e-8
PARABOLIC_ORDER_BOUND = 64
ROOT_RESIDUAL_TOL = 1e-9
BRANCH_COLLISION_TOL = 1e-13
LINEARIZER_DPS = 40
LINEARIZER_STOP = 1e-12


# ---------------------------------------------------------------------------
# all-roots solver


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int


def all_roots(coeffs, residual_tol: float = ROOT_RESIDUAL_TOL) -> list[Root]:
    """All complex roots of an ascending-coefficient polynomial.

    Aberth-Ehrlich simultaneous iteration, initial guesses equally
    spaced on the circle of radius 1 + max |c_i / c_n| with a fixed
    angular offset (deterministic, breaks root symmetries), followed
    by a Newton polish.  Near-coincident roots are merged into a
    cluster whose multiplicity is the cluster size.  Roots are sorted
    by real part, then imaginary part.
    """
    c = poly_trim(coeffs)
    zeros_at_origin = 0
    while len(c) > 1 and c[0] == 0:
        c = c[1:]
        zeros_at_origin += 1
    n = len(c) - 1
    roots: list[complex] = []
    if n == 1:
        roots = [-c[0] / c[1]]
    elif n > 1:
        roots = [complex(z) for z in _aberth(np.asarray(c, dtype=complex))]
        _check_residuals(c, roots, residual_tol)
    clusters = _cluster(roots)
    if zeros_at_origin:
        clusters.append(Root(0j, zeros_at_origin))
    clusters.sort(key=lambda r: (r.value.real, r.value.imag))
    return clusters


def _aberth(c: np.ndarray, max_iter: int = 300) -> np.ndarray:
    scale = np.max(np.abs(c))
    c = c / scale
    dc = npoly.polyder(c)
    n = len(c) - 1
    radius = 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))
    angles = 2.0 * np.pi * (np.arange(n) / n) + 0.4
    z = radius * np.exp(1j * angles)
    tiny = 1e-300
    for _ in range(max_iter):
        p = npoly.polyval(z, c)
        dp = npoly.polyval(z, dc)
        dp = np.where(dp == 0, tiny, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, tiny, denom)
        step = w / denom
        z = z - step
        if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    for _ in range(4):  # Newton polish
        p = npoly.polyval(z, c)
        dp = npoly.polyval(z, dc)
        mask = np.abs(dp) > tiny
        z = np.where(mask, z - p / np.where(mask, dp, 1.0), z)
    return z


def _check_residuals(c, roots, residual_tol):
    cs = max(abs(x) for x in c)
    worst = 0.0
    for z in roots:
        res = abs(poly_eval(c, z)) / (cs * max(1.0, abs(z)) ** (len(c) - 1))
        worst = max(worst, res)
    # Multiple roots polish like |res| ~ eps^(1/m); allow a soft factor
    # before declaring failure so genuine clusters still pass.
    if worst > residual_tol:
        raise RootFindingError(
            f"root residual {worst:.3e} exceeds tolerance {residual_tol:.1e}"
        )


def _cluster(roots: list[complex], rel_tol: float = 1e-6) -> list[Root]:
    if not roots:
        return []
    remaining = sorted(roots, key=lambda z: (z.real, z.imag))
    out: list[Root] = []
    used = [False] * len(remaining)
    for i, z in enumerate(remaining):
        if used[i]:
            continue
        members = [z]
        used[i] = True
        for j in range(i + 1, len(remaining)):
            if used[j]:
                continue
            w = remaining[j]
            if abs(w - z) <= rel_tol * (1.0 + abs(z)):
                members.append(w)
                used[j] = True
        center = sum(members) / len(members)
        out.append(Root(center, len(members)))
    return out


# ---------------------------------------------------------------------------
# periodic points


@dataclass(frozen=True)
class PeriodicPoint:
    """A periodic point with its multiplier and stability class."""

    location: complex
    period: int
    multiplier: complex
    classification: str


def classify(multiplier: complex, parabolic_bound: int = PARABOLIC_ORDER_BOUND) -> str:
    """Stability class of a multiplier.

    superattracting: |m| < 1e-9; parabolic: m^q within 1e-8 of 1 for
    some q <= parabolic_bound; otherwise attracting / repelling by
    |m| against 1.  A unit-modulus multiplier that passes none of
    these is reported as indifferent (irrational rotation; outside
    the four exact classes, see docs).
    """
    m = complex(multiplier)
    if abs(m) < SUPERATTRACTING_TOL:
        return "superattracting"
    power = m
    for _ in range(parabolic_bound):
        if abs(power - 1.0) < PARABOLIC_TOL:
            return "parabolic"
        power *= m
    if abs(m) < 1.0:
        return "attracting"
    if abs(m) > 1.0:
        return "repelling"
    return "indifferent"


def cycle_multiplier(f: RationalMap, z: complex, period: int) -> complex:
    df = f.derivative()
    m = 1 + 0j
    w = z
    for _ in range(period):
        m *= df(w)
        w = f(w)
    return m


def make_periodic_point(f: RationalMap, z: complex, period: int) -> PeriodicPoint:
    """Polish the candidate by Newton on f^period(z) - z, then validate."""
    z = _polish_periodic(f, z, period)
    w = f.iterate(z, period)
    if abs(w - z) > 1e-9 * (1.0 + abs(z)):
        raise ConstructionError(
            f"|f^{period}(z) - z| = {abs(w - z):.3e}; not a period-{period} point"
        )
    m = cycle_multiplier(f, z, period)
    return PeriodicPoint(z, period, m, classify(m))


def _polish_periodic(f: RationalMap, z: complex, period: int) -> complex:
    for _ in range(5):
        res = f.iterate(z, period) - z
        dres = cycle_multiplier(f, z, period) - 1.0
        if abs(dres) < 1e-8:  # parabolic point: Newton would blow up
            break
        step = res / dres
        z = z - step
        if abs(step) < 1e-15 * (1.0 + abs(z)):
            break
    return z


def iterated_pair(f: RationalMap, n: int, degree_budget: int = 4096) -> RationalFunction:
    """Coefficient pair of f^n, composed step by step."""
    if f.degree**n > degree_budget:
        raise ConfigError(
            f"degree {f.degree}^{n} exceeds the composition budget {degree_budget}"
        )
    g: RationalFunction = RationalFunction(f.num, f.den)
    for _ in range(n - 1):
        g = compose(RationalFunction(f.num, f.den), g)
    return g


def periodic_points(
    f: RationalMap, period: int, degree_budget: int = 4096
) -> list[PeriodicPoint]:
    """All finite points of exact period `period`, sorted by (re, im).

    Roots of the fixed-point polynomial of f^period; points whose
    minimal period is a proper divisor are discarded.
    """
    if period < 1:
        raise ConfigError("period must be >= 1")
    fn = iterated_pair(f, period, degree_budget)
    # P_n(z) - z Q_n(z) = 0
    g = poly_sub(fn.num, poly_mul((0j, 1 + 0j), fn.den))
    out = []
    for root in all_roots(g):
        z = root.value
        if _minimal_period(f, z, period) != period:
            continue
        out.append(make_periodic_point(f, z, period))
    out.sort(key=lambda p: (p.location.real, p.location.imag))
    return out


def _minimal_period(f: RationalMap, z: complex, period: int) -> int:
    w = z
    for m in range(1, period):
        w = f(w)
        if period % m == 0 and abs(w - z) < 1e-7 * (1.0 + abs(z)):
            return m
    return period


# ---------------------------------------------------------------------------
# preimage solving (shared with orbit construction and Julia sampling)


def preimage_points(f: RationalMap, w: complex) -> list[complex]:
    """All finite solutions of f(z) = w, sorted by argument then modulus."""
    g = poly_sub(f.num, tuple(w * q for q in f.den))
    roots: list[complex] = []
    for r in all_roots(g):
        roots.extend([r.value] * r.multiplicity)
    roots.sort(key=lambda z: (cmath.phase(z), abs(z)))
    return roots


# ---------------------------------------------------------------------------
# Koenigs linearizer


class Linearizer:
    """Koenigs coordinate at a repelling fixed point.

    phi(f(z)) = multiplier * phi(z) on the certified disk, with
    phi(a) = 0 and phi'(a) = 1.  Evaluation outside the disk pulls the
    point back with the a-fixing inverse branch until it enters, then
    pushes the value forward by powers of the multiplier.
    """

    def __init__(self, f: RationalMap, point: PeriodicPoint, radius: float):
        if point.period != 1 or point.classification != "repelling":
            raise PreconditionError("linearizer base must be a repelling fixed point")
        self.map = f
        self.point = point
        self.radius = radius
        self._num = [mp.mpc(c) for c in f.num]
        self._den = [mp.mpc(c) for c in f.den]
        eps = quadratic_epsilon(f)
        self._quad_eps = mp.mpc(eps) if eps is not None else None
        with mp.workdps(LINEARIZER_DPS):
            a = _mp_fixed_point(self._num, self._den, mp.mpc(point.location))
            self._a = a
            p, q = _mp_eval(self._num, a), _mp_eval(self._den, a)
            dp, dq = _mp_eval(_mp_der(self._num), a), _mp_eval(_mp_der(self._den), a)
            self._lambda = (dp * q - p * dq) / q**2

    @property
    def multiplier(self) -> complex:
        return complex(self._lambda)

    def __call__(self, z: complex) -> complex:
        with mp.workdps(LINEARIZER_DPS):
            w = mp.mpc(z)
            pushed = 0
            while abs(w - self._a) > self.radius:
                w = self._pullback(w)
                pushed += 1
                if pushed > 80:
                    raise DomainError(
                        "point did not reach the certified disk under pullback"
                    )
            val = self._koenigs_limit(w)
            return complex(val * self._lambda**pushed)

    def _pullback(self, w):
        """One step of the a-fixing inverse branch, by Newton from the
        linear prediction a + (w - a)/lambda (closed form for the
        quadratic family)."""
        guess = self._a + (w - self._a) / self._lambda
        if self._quad_eps is not None:
            s = mp.sqrt(w - self._quad_eps)
            return s if abs(s - guess) <= abs(-s - guess) else -s
        return _mp_inverse_step(self._num, self._den, w, guess)

    def _koenigs_limit(self, w):
        a, lam = self._a, self._lambda
        val = w - a
        power = mp.mpc(1)
        for _ in range(400):
            w = self._pullback(w)
            power *= lam
            new = power * (w - a)
            if abs(new - val) < LINEARIZER_STOP:
                return new
            val = new
        raise ConstructionError("Koenigs limit did not stabilize to 1e-12")


def _mp_der(c):
    return [k * c[k] for k in range(1, len(c))] or [mp.mpc(0)]


def _mp_eval(c, z):
    acc = mp.mpc(0)
    for x in reversed(c):
        acc = acc * z + x
    return acc


def _mp_fixed_point(num, den, guess):
    """Polish f(z) = z in working precision."""
    z = guess
    for _ in range(60):
        p, q = _mp_eval(num, z), _mp_eval(den, z)
        g = p - z * q
        dg = _mp_eval(_mp_der(num), z) - q - z * _mp_eval(_mp_der(den), z)
        step = g / dg
        z = z - step
        if abs(step) < mp.mpf(10) ** (-LINEARIZER_DPS + 4):
            return z
    raise ConstructionError("fixed point did not polish in extended precision")


def _mp_inverse_step(num, den, target, guess):
    """Newton solve f(w) = target from the given branch guess."""
    w = guess
    dnum, dden = _mp_der(num), _mp_der(den)
    for _ in range(80):
        p, q = _mp_eval(num, w), _mp_eval(den, w)
        g = p - target * q
        dg = _mp_eval(dnum, w) - target * _mp_eval(dden, w)
        step = g / dg
        w = w - step
        if abs(step) < mp.mpf(10) ** (-LINEARIZER_DPS + 4) * (1 + abs(w)):
            return w
    raise ConstructionError("inverse branch Newton did not converge")


def build_linearizer(
    f: RationalMap,
    point: PeriodicPoint,
    initial_radius: float | None = None,
    boundary_samples: int = 64,
) -> Linearizer:
    """Certify a disk for the Koenigs coordinate by shrink-and-retry.

    The candidate radius is accepted when the inverse branch maps the
    sampled boundary strictly inside the disk with contraction factor
    at most (1/|lambda| + 1)/2; the maximum principle then controls
    the interior at desk scale.
    """
    lam = abs(point.multiplier)
    if lam <= 1.0:
        raise PreconditionError("linearizer base must be repelling")
    target = (1.0 / lam + 1.0) / 2.0
    r = initial_radius if initial_radius is not None else 0.5 * (1.0 + abs(point.location))
    lin = Linearizer(f, point, r)
    for _ in range(60):
        lin.radius = r
        if _radius_certified(lin, r, target, boundary_samples):
            lin.radius = r
            return lin
        r *= 0.5
    raise ConstructionError("no certified linearization disk found")


def _radius_certified(lin: Linearizer, r: float, target: float, samples: int) -> bool:
    with mp.workdps(LINEARIZER_DPS):
        a = lin._a
        for k in range(samples):
            z = a + r * mp.exp(2j * mp.pi * k / samples)
            try:
                w = lin._pullback(z)
            except ConstructionError:
                return False
            if abs(w - a) > target * r:
                return False
            # the Newton solution must actually invert the map on this branch
            res = _mp_eval(lin._num, w) / _mp_eval(lin._den, w) - z
            if abs(res) > mp.mpf(10) ** (-LINEARIZER_DPS + 8):
                return False
    return True


# ---------------------------------------------------------------------------
# collinearity of preimages in the Koenigs coordinate


@dataclass(frozen=True)
class CollinearityReport:
    verdict: str  # "line" | "full" | "inconclusive"
    max_deviation: float
    spread: float
    n_points: int
    exceptional_family_flag: bool


def collinearity_in_linearizer(
    f: RationalMap,
    lin: Linearizer,
    depth: int,
    node_budget: int = 65536,
) -> CollinearityReport:
    """Do the preimages of a accumulate along a line through a?

    Enumerates the full backward tree of the fixed point to the given
    depth, keeps the nodes inside the certified disk (excluding a
    itself), maps them through phi, and fits a real line through 0 by
    total least squares.  Verdict "line" when the maximum perpendicular
    deviation is below 1e-8 of the spread, "full" otherwise,
    "inconclusive" with fewer than 3 points.

    Power maps z**d put the preimages (roots of unity) on a genuine
    line in the phi coordinate, so the flag for that exceptional
    family is reported alongside the raw verdict rather than folded
    into it.
    """
    a = lin.point.location
    if f.degree**depth > node_budget:
        raise ConfigError(f"preimage tree of depth {depth} exceeds the node budget")
    level = [a]
    nodes: list[complex] = []
    for _ in range(depth):
        nxt: list[complex] = []
        for w in level:
            nxt.extend(preimage_points(f, w))
        # collapse duplicates so shared subtrees are walked once
        nxt.sort(key=lambda z: (z.real, z.imag))
        dedup: list[complex] = []
        for z in nxt:
            if not dedup or abs(z - dedup[-1]) > 1e-12 * (1.0 + abs(z)):
                dedup.append(z)
        nodes.extend(dedup)
        level = dedup
    in_disk = [
        z
        for z in nodes
        if abs(z - a) <= lin.radius and abs(z - a) > 1e-12 * (1.0 + abs(a))
    ]
    if len(in_disk) < 3:
        return CollinearityReport(
            "inconclusive", 0.0, 0.0, len(in_disk), _exceptional_family(f)
        )
    images = np.array([lin(z) for z in in_disk], dtype=complex)
    theta = 0.5 * cmath.phase(complex(np.sum(images**2)))
    rotated = images * cmath.exp(-1j * theta)
    max_dev = float(np.max(np.abs(rotated.imag)))
    spread = float(np.max(np.abs(images)))
    verdict = "line" if max_dev < 1e-8 * spread else "full"
    return CollinearityReport(verdict, max_dev, spread, len(in_disk), _exceptional_family(f))


def _exceptional_family(f: RationalMap) -> bool:
    """Power maps and the Chebyshev-like quadratic, whose height sets
    degenerate to arithmetic progressions."""
    if not f.is_polynomial:
        return False
    if abs(f.num[-1] - 1.0) < 1e-12 and all(abs(c) < 1e-12 for c in f.num[:-1]):
        return True
    if len(f.num) == 3 and abs(f.num[1]) < 1e-12 and abs(f.num[2] - 1.0) < 1e-12:
        return abs(f.num[0] + 2.0) < 1e-12
    return False
