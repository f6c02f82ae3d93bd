"""The quadratic family z**2 + epsilon: distinguished fixed point,
certified disk construction, excursion statistics, cocycle floor checks,
and the sign-definite value semigroup.

The distinguished fixed point is a(eps) = (1 + sqrt(1 - 4 eps))/2, the
repelling one for real eps < 1/4.  All Julia-geometry checks in this
module hang off two certified radii: sigma, below which the map is
injective on D_sigma(a) with image covering the closed disk and with
the first three backward disks pairwise disjoint, and delta, half the
smallest log-derivative gap to |f'(a)| over sampled Julia points away
from those disks.  Certificates are dense boundary samples with
recorded margins, not interval arithmetic.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cocycle import CocycleValue, DensityReport, cocycle_vs_fixed, make_density_report
from .errors import (
    ConfigError,
    ConstructionError,
    DomainError,
    PreconditionError,
)
from .julia import JuliaSample, inverse_iteration_sample
from .maps import QuadraticParam, RationalMap, quadratic_epsilon
from .orbits import (
    OrbitWord,
    RealizedOrbit,
    concatenate,
    is_in_Pi_a,
    principal_symbol,
    realize,
    shift,
)
from .periodic import make_periodic_point

BRANCH_EXCEPTIONAL_TOL = 1e-10
LIST_MEMBER_TOL = 1e-12
CERT_MARGIN = 1e-6
SIGMA_FLOOR_FACTOR = 1e-4
NEAR_BOUNDARY_PROXIMITY = 1e-3
NORMALIZED_TOL = 1e-9
DEFAULT_MAX_PREFIX = 10


# ---------------------------------------------------------------------------
# the distinguished fixed point and the exceptional parameters


def fixed_point_a(epsilon: complex) -> complex:
    """(1 + sqrt(1 - 4 epsilon))/2 with the principal square root.

    For real epsilon < 1/4 this is the larger real fixed point; real
    epsilon >= 1/4 puts 1 - 4 epsilon on the closed negative axis where
    the branch is ill-defined (the fixed points collide or leave the
    real line), which is a domain error.
    """
    eps = complex(epsilon)
    w = 1.0 - 4.0 * eps
    if w.imag == 0.0 and w.real <= 0.0:
        raise DomainError(
            "1 - 4*epsilon lies on the negative real cut; no distinguished fixed point"
        )
    return (1.0 + cmath.sqrt(w)) / 2.0


def quadratic_map(epsilon: complex) -> RationalMap:
    return QuadraticParam(complex(epsilon)).map


def branch_exceptional(epsilon: complex) -> bool:
    """True when the critical value equals the non-fixed preimage -a of
    the fixed point, so every backward orbit off the fixed one dies on
    the critical point."""
    a = fixed_point_a(epsilon)
    return abs(-a - complex(epsilon)) < BRANCH_EXCEPTIONAL_TOL


def list_1_1_member(epsilon: complex) -> bool:
    """The two quadratic parameters conjugate to a power or Chebyshev
    map, whose height sets degenerate to arithmetic progressions."""
    eps = complex(epsilon)
    return abs(eps) < LIST_MEMBER_TOL or abs(eps + 2.0) < LIST_MEMBER_TOL


# ---------------------------------------------------------------------------
# word construction for the family


@functools.lru_cache(maxsize=128)
def _family_context(eps: complex):
    f = quadratic_map(eps)
    point = make_periodic_point(f, fixed_point_a(eps), 1)
    return f, point


def family_word(epsilon: complex, prefix: str, sigma: float | None = None) -> OrbitWord:
    """An orbit word at a(epsilon); sigma defaults to the certified
    radius (pass one explicitly for parameters where the certificate
    construction fails, such as the branch-exceptional point)."""
    eps = complex(epsilon)
    f, point = _family_context(eps)
    if sigma is None:
        sigma = find_sigma(eps)[0]
    return OrbitWord(f, point, prefix, sigma)


def word_from_json(data: dict) -> OrbitWord:
    if "epsilon" in data:
        eps = complex(data["epsilon"][0], data["epsilon"][1])
        return family_word(eps, data["prefix"], data["sigma"])
    f = RationalMap.from_json(data["map"])
    base = make_periodic_point(f, complex(data["base"][0], data["base"][1]), 1)
    return OrbitWord(f, base, data["prefix"], data["sigma"], data.get("tail_rule", "nearest"))


def sample_words(
    epsilon: complex,
    n: int,
    seed: int,
    max_len: int = DEFAULT_MAX_PREFIX,
    require_normalized: bool = True,
    sigma: float | None = None,
) -> list[OrbitWord]:
    """n distinct admissible words with seeded random prefixes.

    Normalized words start with '-' (first backward step to -a), the
    hypothesis under which excursion statistics are defined.
    """
    if n < 1:
        raise ConfigError("need n >= 1 words")
    rng = np.random.default_rng(seed)
    out: list[OrbitWord] = []
    seen: set[str] = set()
    attempts = 0
    while len(out) < n and attempts < 80 * n:
        attempts += 1
        length = int(rng.integers(1, max_len + 1))
        bits = rng.integers(0, 2, size=length)
        prefix = "".join("+-"[int(b)] for b in bits)
        if require_normalized:
            prefix = "-" + prefix[1:]
        if prefix in seen:
            continue
        seen.add(prefix)
        w = family_word(epsilon, prefix, sigma)
        if is_in_Pi_a(w, len(prefix) + 80).member:
            out.append(w)
    if len(out) < n:
        raise ConfigError(
            f"only {len(out)} of {n} admissible words found within the attempt budget"
        )
    return out


def normalize_word(word: OrbitWord) -> OrbitWord:
    """Shift until the first backward point is the non-fixed preimage -a."""
    psym = principal_symbol(word)
    k = 0
    while k < len(word.prefix) and word.prefix[k] == psym:
        k += 1
    if k == len(word.prefix):
        raise PreconditionError(
            "all-principal word realizes the fixed orbit; nothing to normalize"
        )
    return shift(word, -k) if k else word


# ---------------------------------------------------------------------------
# Julia containment and derivative extremality (real parameters)


@dataclass(frozen=True)
class ContainmentReport:
    epsilon: float
    radius: float  # |a(eps)|, the critical circle radius
    n: int
    violations: tuple[complex, ...]
    near_boundary: tuple[complex, ...]
    proximity_failures: tuple[complex, ...]
    max_excess: float  # largest signed crossing of the circle bound


def _real_family_pre(epsilon, sample: JuliaSample):
    eps = complex(epsilon)
    if eps.imag != 0.0:
        raise PreconditionError("containment checks are stated for real epsilon")
    if eps.real >= 0.25:
        raise PreconditionError("epsilon must be below 1/4")
    if list_1_1_member(eps):
        raise PreconditionError("epsilon 0 and -2 are excluded (degenerate geometry)")
    if not sample.points:
        raise PreconditionError("sample must be nonempty")
    return eps.real


def disk_containment_check(
    epsilon: float,
    sample: JuliaSample,
    tol: float,
    near_tol: float = NEAR_BOUNDARY_PROXIMITY,
) -> ContainmentReport:
    """Julia points against the circle |z| = a(eps): inside (closure)
    for eps < 0, outside for 0 < eps < 1/4; points within tol of the
    circle must cluster at +-a."""
    e = _real_family_pre(epsilon, sample)
    a = fixed_point_a(e).real
    violations = []
    near = []
    prox = []
    max_excess = -math.inf
    for z in sample.points:
        excess = (abs(z) - a) if e < 0 else (a - abs(z))
        max_excess = max(max_excess, excess)
        if excess > tol:
            violations.append(z)
        if excess > -tol:
            near.append(z)
            if min(abs(z - a), abs(z + a)) > near_tol:
                prox.append(z)
    return ContainmentReport(
        e, a, len(sample.points), tuple(violations), tuple(near), tuple(prox), max_excess
    )


@dataclass(frozen=True)
class ExtremalityReport:
    epsilon: float
    bound: float  # |f'(a)| = 2 a(eps)
    n: int
    max_abs_deriv: float
    min_abs_deriv: float
    violations: tuple[complex, ...]
    equality_failures: tuple[complex, ...]


def derivative_extremality_check(
    epsilon: float,
    sample: JuliaSample,
    tol: float,
    near_tol: float = NEAR_BOUNDARY_PROXIMITY,
) -> ExtremalityReport:
    """|f'| over the Julia sample is extremal at a(eps): a maximum for
    eps < 0, a minimum for 0 < eps < 1/4, with equality only near +-a."""
    e = _real_family_pre(epsilon, sample)
    a = fixed_point_a(e).real
    bound = 2.0 * a
    ds = [abs(2.0 * z) for z in sample.points]
    violations = []
    eq_fail = []
    for z, d in zip(sample.points, ds):
        bad = d > bound + tol if e < 0 else d < bound - tol
        if bad:
            violations.append(z)
        if abs(d - bound) <= tol and min(abs(z - a), abs(z + a)) > near_tol:
            eq_fail.append(z)
    return ExtremalityReport(
        e, bound, len(ds), max(ds), min(ds), tuple(violations), tuple(eq_fail)
    )


# ---------------------------------------------------------------------------
# the certified sigma / delta construction


@dataclass(frozen=True)
class SigmaDelta:
    epsilon: complex
    sigma: float
    delta: float
    certificates: dict


def _sigma_certificates(eps: complex, a: complex, sigma: float, n_boundary: int) -> dict:
    """Boundary-sampled margins for the disk certificates at this sigma.

    univalence: the disk must avoid the critical point 0 (a disk of
    radius below |center| contains no antipodal pair, so z**2 is
    injective on it); covering: |f - a| on the boundary must exceed
    sigma while the image loop winds once about a; disjointness: the
    backward disk chain D_sigma(a), D', f^{-1}(D'), f^{-2}(D') must be
    pairwise separated, tested via bounding circles of the sampled
    boundary clouds around their known centers.
    """
    theta = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    circle0 = a + sigma * np.exp(1j * theta)
    image = circle0 * circle0 + eps
    covering = float(np.min(np.abs(image - a))) - sigma
    winding = float(
        np.sum(np.angle((np.roll(image, -1) - a) / (image - a))) / (2.0 * np.pi)
    )
    # boundary of D' (the preimage component of D_sigma(a) at -a)
    s1 = np.sqrt(circle0 - eps)
    cloud1 = np.where(np.abs(s1 + a) <= np.abs(-s1 + a), s1, -s1)
    # the two components of f^{-1}(D'), centered at the preimages of -a
    c2 = cmath.sqrt(-a - eps)
    centers2 = [c2, -c2]
    s2 = np.sqrt(cloud1 - eps)
    pts2 = np.concatenate([s2, -s2])
    # the four components of f^{-2}(D')
    centers3 = []
    for c in centers2:
        r = cmath.sqrt(c - eps)
        centers3.extend([r, -r])
    s3 = np.sqrt(pts2 - eps)
    pts3 = np.concatenate([s3, -s3])
    reject = {
        "univalence_margin": -1.0,
        "covering_margin": covering,
        "winding": winding,
        "disjointness_margin": -1.0,
    }
    regions = [(a, sigma), (-a, float(np.max(np.abs(cloud1 + a))))]
    for pts, centers in ((pts2, centers2), (pts3, centers3)):
        owner = np.argmin(np.abs(pts[:, None] - np.array(centers)[None, :]), axis=1)
        for i, c in enumerate(centers):
            cloud = pts[owner == i]
            if len(cloud) == 0:
                return reject
            regions.append((c, float(np.max(np.abs(cloud - c)))))
    disjoint = math.inf
    for (ci, ri), (cj, rj) in itertools.combinations(regions, 2):
        disjoint = min(disjoint, abs(ci - cj) - ri - rj)
    return {
        "univalence_margin": abs(a) - sigma,
        "covering_margin": covering,
        "winding": winding,
        "disjointness_margin": float(disjoint),
    }


def _admissible(cert: dict) -> bool:
    return (
        cert["univalence_margin"] >= CERT_MARGIN
        and cert["covering_margin"] >= CERT_MARGIN
        and cert["disjointness_margin"] >= CERT_MARGIN
        and abs(cert["winding"] - 1.0) < 0.01
    )


@functools.lru_cache(maxsize=128)
def find_sigma(epsilon: complex, n_boundary: int = 1024) -> tuple[float, dict]:
    """Largest certified sigma <= |a(eps)|/4, by bisection on the
    boundary-sampled certificates.  Fails when nothing above the floor
    1e-4*|a| is admissible (as at the branch-exceptional parameter,
    where the backward disks necessarily merge at the critical point)."""
    eps = complex(epsilon)
    a = fixed_point_a(eps)
    hi = abs(a) / 4.0
    cert = _sigma_certificates(eps, a, hi, n_boundary)
    if _admissible(cert):
        return hi, cert
    lo = SIGMA_FLOOR_FACTOR * abs(a)
    cert_lo = _sigma_certificates(eps, a, lo, n_boundary)
    if not _admissible(cert_lo):
        raise ConstructionError(
            f"no certified sigma above the floor {lo:.3e} at epsilon {eps}"
        )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _admissible(_sigma_certificates(eps, a, mid, n_boundary)):
            lo = mid
        else:
            hi = mid
    return lo, _sigma_certificates(eps, a, lo, n_boundary)


def _in_D_prime(z: complex, eps: complex, a: complex, sigma: float) -> bool:
    """Membership in the preimage component of D_sigma(a) around -a."""
    return abs(z * z + eps - a) < sigma and abs(z + a) < abs(z - a)


def find_sigma_delta(
    epsilon: complex, sample: JuliaSample, n_boundary: int = 1024
) -> SigmaDelta:
    """The certified sigma together with the log-derivative floor delta.

    delta is half the smallest |ln|f'(z)| - ln|f'(a)|| over sampled
    Julia points outside D_sigma(a) and D'; the sampled minimum sits
    above the true infimum over J, so the recorded margins carry the
    caveat that a denser sample can only shrink delta.
    """
    eps = complex(epsilon)
    if list_1_1_member(eps):
        raise PreconditionError("sigma/delta construction excludes epsilon in {0, -2}")
    if not sample.points:
        raise PreconditionError("need a nonempty Julia sample")
    if sample.map_json != quadratic_map(eps).to_json():
        raise PreconditionError("sample was drawn for a different map")
    sigma, cert = find_sigma(eps, n_boundary)
    a = fixed_point_a(eps)
    base = math.log(2.0 * abs(a))
    gaps = []
    for z in sample.points:
        if abs(z - a) < sigma or _in_D_prime(z, eps, a, sigma):
            continue
        if z == 0:
            continue
        gaps.append(abs(math.log(2.0 * abs(z)) - base))
    if not gaps:
        raise ConstructionError("no sampled Julia points outside the excluded disks")
    delta = 0.5 * min(gaps)
    if delta <= 0.0:
        raise ConstructionError("sampled log-derivative floor is not positive")
    certs = dict(cert)
    certs["delta_sample_size"] = float(len(gaps))
    return SigmaDelta(eps, sigma, delta, certs)


def default_sigma_delta(
    epsilon: complex, seed: int, n_points: int = 10000, depth: int = 40
) -> SigmaDelta:
    """find_sigma_delta over a fresh seeded inverse-iteration sample."""
    eps = complex(epsilon)
    sample = inverse_iteration_sample(quadratic_map(eps), n_points, depth, seed)
    return find_sigma_delta(eps, sample)


# ---------------------------------------------------------------------------
# excursion statistics and the cocycle floor


@dataclass(frozen=True)
class ExcursionStats:
    word: OrbitWord
    J_indices: tuple[int, ...]  # last in-disk index before each exit
    K_indices: tuple[int, ...]  # first in-disk index after each excursion
    s: int  # excursion count
    d: int  # total time spent outside the disk (depth indices >= 1)


def excursion_stats(word: OrbitWord, sd: SigmaDelta) -> ExcursionStats:
    """Leaving/return indices of the realized orbit against the
    certified disk.  Requires the normalized form (first backward point
    at -a); normalize_word performs the shift."""
    orb = realize(word, len(word.prefix) + 120)
    a = word.base.location
    if abs(orb.points[1] + a) > NORMALIZED_TOL * (1.0 + abs(a)):
        raise PreconditionError(
            "word is not normalized (y_{-1} != -a); apply normalize_word first"
        )
    inside = [abs(p - a) < sd.sigma for p in orb.points]
    J = [j for j in range(orb.depth) if inside[j] and not inside[j + 1]]
    K = [j for j in range(1, orb.depth + 1) if not inside[j - 1] and inside[j]]
    d = sum(1 for j in range(1, orb.depth + 1) if not inside[j])
    return ExcursionStats(word, tuple(J), tuple(K), len(J), d)


@dataclass(frozen=True)
class BoundCheck:
    ok: bool
    margin: float  # |beta| - tail_bound - delta_used * d
    beta: CocycleValue
    stats: ExcursionStats
    delta_used: float


def cocycle_lower_bound_check(word: OrbitWord, sd: SigmaDelta, tol: float) -> BoundCheck:
    """Certified check of |beta| > delta * d.

    When the word's parameter differs from the one delta was computed
    at (the complex-perturbation regime, where sigma/delta come from
    the nearby real parameter), the floor is delta/2.
    """
    stats = excursion_stats(word, sd)
    beta = cocycle_vs_fixed(word, tol)
    eps_word = quadratic_epsilon(word.map)
    delta_used = sd.delta if eps_word == sd.epsilon else 0.5 * sd.delta
    margin = abs(beta.value) - beta.tail_bound - delta_used * stats.d
    return BoundCheck(margin > 0.0, margin, beta, stats, delta_used)


# ---------------------------------------------------------------------------
# the value semigroup


def build_B_epsilon(
    epsilon: complex,
    word_budget: int,
    l_max: int,
    tol: float,
    seed: int,
    max_len: int = DEFAULT_MAX_PREFIX,
    sum_cap: int = 500_000,
) -> DensityReport:
    """Sums of up to l_max single-word cocycle values over a seeded
    word sample, as a density report whose window touches 0 so the gap
    at the origin exposes the sign-definite floor."""
    eps = complex(epsilon)
    if list_1_1_member(eps):
        raise PreconditionError("B is degenerate at epsilon in {0, -2}")
    if eps.real == 0.0:
        raise PreconditionError("Re epsilon must have a definite sign")
    if l_max < 1:
        raise ConfigError("l_max must be >= 1")
    total = sum(math.comb(word_budget + l - 1, l) for l in range(1, l_max + 1))
    if total > sum_cap:
        raise ConfigError(f"{total} sums exceed the enumeration cap {sum_cap}")
    words = sample_words(eps, word_budget, seed, max_len)
    betas = [cocycle_vs_fixed(w, tol) for w in words]
    pairs: list[tuple[float, float]] = []
    for l in range(1, l_max + 1):
        for combo in itertools.combinations_with_replacement(range(len(betas)), l):
            pairs.append(
                (
                    sum(betas[i].value for i in combo),
                    sum(betas[i].tail_bound for i in combo),
                )
            )
    vmin = min(v for v, _ in pairs)
    vmax = max(v for v, _ in pairs)
    window = (min(0.0, vmin), max(0.0, vmax))
    return make_density_report(pairs, window)


# ---------------------------------------------------------------------------
# limit decompositions


@dataclass(frozen=True)
class LimitDecomposition:
    sequence_id: str
    l: int
    nu_indices: tuple[tuple[int, ...], ...]  # per sequence member
    component_words: tuple[OrbitWord, ...]
    component_betas: tuple[CocycleValue, ...]
    sequence_betas: tuple[CocycleValue, ...]
    defects: tuple[float, ...]
    nu_tail_distances: tuple[float, ...]  # |point at the last junction - a|
    window_sup: tuple[float, ...]  # sup over the window of distance to c's orbit
    limit_value: float
    defects_decreasing: bool
    nu_distances_decreasing: bool
    windows_converging: bool
    converged: bool


def _window_sup(worb: RealizedOrbit, offset: int, guide: RealizedOrbit, width: int) -> float:
    return max(abs(worb.points[offset + t] - guide.points[t]) for t in range(width + 1))


def _decreasing(xs: tuple[float, ...]) -> bool:
    return all(b <= a * (1.0 + 1e-6) + 1e-12 for a, b in zip(xs, xs[1:]))


def limit_decomposition_check(
    y: OrbitWord,
    c: OrbitWord,
    junction_sequence: list[int],
    tol: float,
    window_depth: int = 8,
    final_defect_target: float = 1e-8,
) -> LimitDecomposition:
    """The word sequence concat(y, c, j_n) against its two-component
    limit: beta values must converge to beta(y) + beta(c), the junction
    points must fall into a geometrically, and the post-junction window
    must track c's realized orbit.  A fixed-orbit c degenerates to the
    one-component decomposition with limit beta(y)."""
    junctions = list(junction_sequence)
    if junctions != sorted(junctions) or len(set(junctions)) != len(junctions):
        raise PreconditionError("junction sequence must be strictly increasing")
    mem_c = is_in_Pi_a(c, len(c.prefix) + 80)
    degenerate = mem_c.reason == "fixed-orbit"
    beta_y = cocycle_vs_fixed(y, tol)
    beta_c = CocycleValue(0.0, 0.0, 0) if degenerate else cocycle_vs_fixed(c, tol)
    expected = beta_y.value + beta_c.value
    a = y.base.location
    guide = realize(c, window_depth + 2)
    betas = []
    defects = []
    nu_dist = []
    wsup = []
    for j in junctions:
        w = concatenate(y, c, j)
        b = cocycle_vs_fixed(w, tol)
        worb = realize(w, j + len(c.prefix) + window_depth + 20)
        betas.append(b)
        defects.append(abs(b.value - expected))
        nu_dist.append(abs(worb.points[j] - a))
        wsup.append(_window_sup(worb, j, guide, window_depth))
    if degenerate:
        l, comps, comp_betas = 1, (y,), (beta_y,)
        nus = tuple((0,) for _ in junctions)
    else:
        l, comps, comp_betas = 2, (y, c), (beta_y, beta_c)
        nus = tuple((0, j) for j in junctions)
    return LimitDecomposition(
        sequence_id=f"concat({y.prefix!r},{c.prefix!r})@{junctions}",
        l=l,
        nu_indices=nus,
        component_words=comps,
        component_betas=comp_betas,
        sequence_betas=tuple(betas),
        defects=tuple(defects),
        nu_tail_distances=tuple(nu_dist),
        window_sup=tuple(wsup),
        limit_value=expected,
        defects_decreasing=_decreasing(tuple(defects)),
        nu_distances_decreasing=_decreasing(tuple(nu_dist)),
        windows_converging=_decreasing(tuple(wsup)),
        converged=defects[-1] <= final_defect_target,
    )


def nested_decomposition_check(
    y: OrbitWord,
    c: OrbitWord,
    junction: int,
    tol: float,
    window_depth: int = 8,
    defect_target: float = 1e-6,
) -> LimitDecomposition:
    """Three-component variant: concat(concat(y, c, j), c, 2j) against
    beta(y) + 2*beta(c)."""
    w1 = concatenate(y, c, junction)
    w2 = concatenate(w1, c, 2 * junction)
    beta_y = cocycle_vs_fixed(y, tol)
    beta_c = cocycle_vs_fixed(c, tol)
    expected = beta_y.value + 2.0 * beta_c.value
    b2 = cocycle_vs_fixed(w2, tol)
    defect = abs(b2.value - expected)
    a = y.base.location
    guide = realize(c, window_depth + 2)
    worb = realize(w2, 2 * junction + len(c.prefix) + window_depth + 20)
    return LimitDecomposition(
        sequence_id=f"nested({y.prefix!r},{c.prefix!r})@{junction}",
        l=3,
        nu_indices=((0, junction, 2 * junction),),
        component_words=(y, c, c),
        component_betas=(beta_y, beta_c, beta_c),
        sequence_betas=(b2,),
        defects=(defect,),
        nu_tail_distances=(abs(worb.points[2 * junction] - a),),
        window_sup=(_window_sup(worb, 2 * junction, guide, window_depth),),
        limit_value=expected,
        defects_decreasing=True,
        nu_distances_decreasing=True,
        windows_converging=True,
        converged=defect <= defect_target,
    )
