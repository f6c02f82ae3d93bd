"""The basic cocycle as a certified series, heights, and density reports.

The cocycle of two backward orbits over the same repelling fixed point
is the series of log-derivative differences along the orbits.  Only
finitely many terms are large: once both orbits sit inside the
certified disk around a, the terms are controlled by the local
Lipschitz constant of ln|f'| and the measured contraction rate, which
gives an explicit geometric tail bound.  Every returned value carries
that bound.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DepthBudgetError,
    DivergentWordError,
    DomainError,
    PreconditionError,
    SingularTermError,
)
from .maps import RationalMap, quadratic_epsilon
from .orbits import OrbitWord, is_in_Pi_a, realize, shift

MIN_TOL = 1e-12
CRITICAL_PROXIMITY = 1e-8
RHO_SIGNAL_FLOOR = 1e-10  # distances below this are rounding noise, not signal
DEPTH_BUDGET = 4000


@dataclass(frozen=True)
class CocycleValue:
    value: float
    tail_bound: float
    depth_used: int


@dataclass(frozen=True)
class HeightPoint:
    word: OrbitWord
    height: float


@dataclass(frozen=True)
class DensityReport:
    """Sorted cocycle/height values with their certified bounds and the
    gap structure over a fixed window (gaps to the window edges count)."""

    values: tuple[tuple[float, float], ...]  # (value, tail_bound), sorted by value
    window: tuple[float, float]
    max_gap: float
    count: int


@dataclass(frozen=True)
class SemigroupTable:
    junctions: tuple[int, ...]
    defects: tuple[float, ...]
    beta_y: CocycleValue
    beta_c: CocycleValue
    betas: tuple[CocycleValue, ...]
    rate: float | None  # fitted geometric decay of the defect, where measurable


@dataclass(frozen=True)
class ProgressionReport:
    ok: bool
    max_gap: float
    gap_location: float
    count: int


# ---------------------------------------------------------------------------
# certified series engine


@functools.lru_cache(maxsize=256)
def _log_deriv_lipschitz(f: RationalMap, a: complex, sigma: float) -> float:
    """Sampled bound for the Lipschitz constant of z -> ln|f'(z)| on
    D_sigma(a): max |f''/f'| on the boundary circle (the quotient is
    holomorphic there, the disk being free of critical points), with a
    5% sampling margin."""
    df = f.derivative()
    ddf = df.derivative()
    worst = 0.0
    for k in range(256):
        z = a + sigma * complex(math.cos(2 * math.pi * k / 256), math.sin(2 * math.pi * k / 256))
        worst = max(worst, abs(ddf(z) / df(z)))
    return 1.05 * worst


def _seq_entry(pts, a, sigma, confirm: int = 4) -> int | None:
    last_outside = -1
    for j, p in enumerate(pts):
        if abs(p - a) >= sigma:
            last_outside = j
    entry = last_outside + 1
    if len(pts) - entry < confirm + 1:
        return None
    return entry


def _measured_rho(seqs_with_entries, a, fallback: float) -> float:
    """Contraction factor of the in-disk tails, from the data when the
    distances are above the noise floor, else the local theoretical
    rate (the tail then contributes at rounding scale anyway)."""
    ratios = []
    for pts, entry in seqs_with_entries:
        d = [abs(p - a) for p in pts]
        for j in range(max(entry, 1), len(pts) - 1):
            if d[j] > RHO_SIGNAL_FLOOR:
                ratios.append(d[j + 1] / d[j])
    return 1.1 * max(ratios) if ratios else fallback


def _certified_series(
    f: RationalMap,
    a: complex,
    sigma: float,
    multiplier: complex,
    tol: float,
    make_pair,
    depth0: int,
    depth_budget: int,
) -> CocycleValue:
    """Sum sum_j [ln|f'(y_j)| - ln|f'(x_j)|] with a certified tail.

    make_pair(depth) -> (x_points, y_points), aligned backward orbits
    starting at index 0.  The truncation depth k is the first index,
    past both entries, where L * rho/(1-rho) * (|x_k - a| + |y_k - a|)
    drops below tol; that expression bounds the discarded tail.
    """
    L = _log_deriv_lipschitz(f, a, sigma)
    df = f.derivative()
    crits = list(f.critical_points())
    fallback_rho = 1.0 / abs(multiplier) + 0.05
    depth = depth0
    while True:
        px, py = make_pair(depth)
        ex = _seq_entry(px, a, sigma)
        ey = _seq_entry(py, a, sigma)
        if ex is not None and ey is not None:
            rho = _measured_rho([(px, ex), (py, ey)], a, fallback_rho)
            if rho >= 0.999:
                raise DivergentWordError(
                    f"measured tail contraction {rho:.3f} certifies no geometric bound"
                )
            coef = L * rho / (1.0 - rho)
            start = max(ex, ey, 1)
            k = None
            bound = math.inf
            for j in range(start, depth + 1):
                bound = coef * (abs(px[j] - a) + abs(py[j] - a))
                if bound <= tol:
                    k = j
                    break
            if k is not None:
                value = 0.0
                for j in range(1, k + 1):
                    for p in (px[j], py[j]):
                        if crits and min(abs(p - c) for c in crits) <= CRITICAL_PROXIMITY:
                            raise SingularTermError(
                                f"orbit point at depth {j} is within"
                                f" {CRITICAL_PROXIMITY:g} of a critical point"
                            )
                    value += math.log(abs(df(py[j]))) - math.log(abs(df(px[j])))
                return CocycleValue(value, bound, k)
        if depth >= depth_budget:
            raise DepthBudgetError(
                f"tail certification did not reach tol={tol:g} within depth {depth_budget}"
            )
        depth = min(depth_budget, 2 * depth)


def _common_base(x: OrbitWord, y: OrbitWord):
    if x.map != y.map or x.base.location != y.base.location or x.sigma != y.sigma:
        raise PreconditionError("cocycle arguments must share map, base, and sigma")


# ---------------------------------------------------------------------------
# cocycle operations


def basic_cocycle(
    x: OrbitWord, y: OrbitWord, tol: float, depth_budget: int = DEPTH_BUDGET
) -> CocycleValue:
    """Certified value of the series between the two backward orbits."""
    if tol < MIN_TOL:
        raise ConfigError(f"tol must be >= {MIN_TOL:g}")
    _common_base(x, y)
    if x == y:
        return CocycleValue(0.0, 0.0, 0)
    depth0 = max(len(x.prefix), len(y.prefix)) + 120

    def make_pair(depth):
        return realize(x, depth).points, realize(y, depth).points

    return _certified_series(
        x.map, x.base.location, x.sigma, x.base.multiplier, tol, make_pair, depth0, depth_budget
    )


def cocycle_vs_fixed(y: OrbitWord, tol: float, depth_budget: int = DEPTH_BUDGET) -> CocycleValue:
    """Cocycle of y against the fixed orbit at the base point."""
    import dataclasses

    return basic_cocycle(dataclasses.replace(y, prefix=""), y, tol, depth_budget)


def series_terms(y: OrbitWord, depth: int) -> list[float]:
    """The individual series terms ln|f'(y_{-j})| - ln|f'(a)| to the
    given depth (diagnostic; the certified sum is cocycle_vs_fixed)."""
    orb = realize(y, depth)
    df = y.map.derivative()
    base = math.log(abs(df(y.base.location)))
    return [math.log(abs(df(p))) - base for p in orb.points[1:]]


def cocycle_field(c: OrbitWord, z: complex, tol: float, depth_budget: int = DEPTH_BUDGET) -> float:
    """The cocycle field at z inside the certified disk.

    The series runs between the backward orbit of z along the a-fixing
    principal branches and the backward orbit of z along c's realized
    branch germ (at each step the preimage closest to c's own realized
    point).  At z = a this is the plain cocycle against the fixed orbit.
    """
    if tol < MIN_TOL:
        raise ConfigError(f"tol must be >= {MIN_TOL:g}")
    f = c.map
    a = c.base.location
    sigma = c.sigma
    if abs(z - a) >= sigma:
        raise DomainError("field evaluation point must lie inside the sigma-disk")
    eps = quadratic_epsilon(f)
    if eps is None:
        raise ConfigError("the cocycle field is implemented for the quadratic family")

    def make_pair(depth):
        corb = realize(c, depth)
        seq_a = _principal_sequence(z, eps, a, sigma, depth)
        seq_c = _germ_sequence(z, eps, corb.points, depth)
        return seq_a, seq_c

    return _certified_series(
        f, a, sigma, c.base.multiplier, tol, make_pair, len(c.prefix) + 120, depth_budget
    ).value


def _principal_sequence(z, eps, a, sigma, depth):
    """Backward orbit of z under the a-fixing inverse branch."""
    import cmath

    pts = [z]
    w = z
    for _ in range(depth):
        s = cmath.sqrt(w - eps)
        w = s if abs(s - a) <= abs(-s - a) else -s
        if abs(w - a) >= sigma:
            raise DomainError(
                "principal inverse branch left the sigma-disk; the disk"
                " certificate does not cover this point"
            )
        pts.append(w)
    return pts


def _germ_sequence(z, eps, guide_points, depth):
    """Backward orbit of z tracking the branch germ of the guide orbit."""
    import cmath

    pts = [z]
    w = z
    for j in range(1, depth + 1):
        s = cmath.sqrt(w - eps)
        guide = guide_points[j]
        d_plus, d_minus = abs(s - guide), abs(-s - guide)
        best, second = min(d_plus, d_minus), max(d_plus, d_minus)
        if second < 2.0 * best:
            raise DomainError(
                f"branch collision at depth {j} while restarting the word's"
                " choices: the germ does not separate the preimages here"
            )
        w = s if d_plus <= d_minus else -s
        pts.append(w)
    return pts


def pushforward_height(p: HeightPoint, n: int) -> HeightPoint:
    """Shift the word n steps and move the height by n*ln|multiplier|."""
    lam = abs(p.word.base.multiplier)
    return HeightPoint(shift(p.word, n), p.height + n * math.log(lam))


def make_density_report(
    pairs: list[tuple[float, float]], window: tuple[float, float]
) -> DensityReport:
    lo, hi = window
    if not hi > lo:
        raise ConfigError("window must be a nondegenerate interval")
    kept = sorted((v, b) for v, b in pairs if lo <= v <= hi)
    vals = [v for v, _ in kept]
    if not vals:
        max_gap = hi - lo
    else:
        gaps = [vals[0] - lo] + [b - a for a, b in zip(vals, vals[1:])] + [hi - vals[-1]]
        max_gap = max(gaps)
    return DensityReport(tuple(kept), (lo, hi), max_gap, len(kept))


def height_set(
    words: list[OrbitWord],
    m_range: tuple[int, int],
    tol: float,
    window: tuple[float, float] = (0.0, 1.0),
) -> DensityReport:
    """All heights beta(y) + m*ln|lambda| over the word sample, clipped
    to the window."""
    m_lo, m_hi = m_range
    if m_hi < m_lo:
        raise ConfigError("empty m_range")
    pairs: list[tuple[float, float]] = []
    for w in words:
        mem = is_in_Pi_a(w, len(w.prefix) + 80)
        if not mem.member:
            raise PreconditionError(f"word {w.prefix!r} is not admissible: {mem.reason}")
        beta = cocycle_vs_fixed(w, tol)
        step = math.log(abs(w.base.multiplier))
        for m in range(m_lo, m_hi + 1):
            pairs.append((beta.value + m * step, beta.tail_bound))
    return make_density_report(pairs, window)


def semigroup_convergence(
    y: OrbitWord, c: OrbitWord, junctions: list[int], tol: float
) -> SemigroupTable:
    """Defect of beta under concatenation, per junction depth.

    The defect |beta(concat(y,c,j)) - beta(y) - beta(c)| decays like the
    distance from y's depth-j point to a; the fitted geometric rate is
    reported as a diagnostic where the defect is above rounding scale.
    """
    from .orbits import concatenate

    if list(junctions) != sorted(junctions) or len(set(junctions)) != len(junctions):
        raise PreconditionError("junctions must be strictly increasing")
    beta_y = cocycle_vs_fixed(y, tol)
    beta_c = cocycle_vs_fixed(c, tol)
    expected = beta_y.value + beta_c.value
    betas = []
    defects = []
    for j in junctions:
        w = concatenate(y, c, j)
        b = cocycle_vs_fixed(w, tol)
        betas.append(b)
        defects.append(abs(b.value - expected))
    rate = _fit_rate(junctions, defects)
    return SemigroupTable(
        tuple(junctions), tuple(defects), beta_y, beta_c, tuple(betas), rate
    )


def _fit_rate(junctions, defects, floor: float = 1e-11) -> float | None:
    pts = [(j, math.log(d)) for j, d in zip(junctions, defects) if d > floor]
    if len(pts) < 2:
        return None
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return math.exp(slope)


def progression_density_check(
    B_sample: list[float],
    M: float,
    window: tuple[float, float],
    epsilon_net: float,
    sum_budget: int = 200,
    term_cap: int = 500_000,
) -> ProgressionReport:
    """Does the finite shadow of the semigroup B + Z*M fill the window
    to within epsilon_net?

    Enumerates all nonempty sums of at most sum_budget sample values
    (with repetition), shifts each by every integer multiple of M that
    lands in the window, and measures the largest gap (window edges
    included).
    """
    if not B_sample:
        raise PreconditionError("B_sample must be nonempty")
    if M == 0:
        raise PreconditionError("M must be nonzero")
    k = len(B_sample)
    if math.comb(sum_budget + k, k) > term_cap:
        raise ConfigError(
            f"{k} generators at sum budget {sum_budget} exceed the enumeration cap"
        )
    lo, hi = window
    step = abs(M)
    sums: list[float] = []

    def rec(i: int, remaining: int, acc: float, nonempty: bool):
        if i == k:
            if nonempty:
                sums.append(acc)
            return
        v = B_sample[i]
        total = acc
        for cnt in range(remaining + 1):
            rec(i + 1, remaining - cnt, total, nonempty or cnt > 0)
            total += v

    rec(0, sum_budget, 0.0, False)
    vals: list[float] = []
    for b in sums:
        m_first = math.ceil((lo - b) / step)
        m_last = math.floor((hi - b) / step)
        for m in range(m_first, m_last + 1):
            vals.append(b + m * step)
    vals.sort()
    if not vals:
        return ProgressionReport(False, hi - lo, 0.5 * (lo + hi), 0)
    gaps = [(vals[0] - lo, lo)] + [
        (b - a, a) for a, b in zip(vals, vals[1:])
    ] + [(hi - vals[-1], vals[-1])]
    max_gap, at = max(gaps, key=lambda g: g[0])
    return ProgressionReport(max_gap <= epsilon_net, max_gap, at + 0.5 * max_gap, len(vals))
