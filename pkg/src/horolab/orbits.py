"""Symbolic backward-orbit words and their numerical realization.

A word fixes a finite prefix of inverse-branch choices at a repelling
fixed point a and continues with the deterministic tail rule: at each
deeper step take the preimage closest to a (ties broken toward the
largest imaginary part, then the largest real part).  Once the orbit
enters the certified disk D_sigma(a), the tail rule coincides with the
a-fixing inverse branch, so the word determines a unique backward orbit
converging to a.

Symbols: the quadratic family z**2 + epsilon uses '+'/'-' for the
principal square root of (w - epsilon) and its negative; a general map
of degree d <= 10 uses digits indexing its preimages sorted by argument
then modulus.
"""

from __future__ import annotations

import cmath
import dataclasses
from dataclasses import dataclass

from .errors import (
    ConfigError,
    ConstructionError,
    DegenerateBranchError,
    DivergentWordError,
    DomainError,
    PreconditionError,
)
from .maps import RationalMap, quadratic_epsilon
from .periodic import PeriodicPoint, preimage_points

RESIDUAL_TOL = 1e-12
COLLISION_TOL = 1e-13
CRITICAL_PROXIMITY = 1e-8
TAIL_CONFIRM = 8  # trailing in-disk steps required before the tail counts as settled
DIVERGENCE_GRACE = 60  # post-prefix depth allowed before a missing tail is an error


@dataclass(frozen=True)
class OrbitWord:
    """A symbolic backward orbit at a repelling fixed point."""

    map: RationalMap
    base: PeriodicPoint
    prefix: str
    sigma: float
    tail_rule: str = "nearest"

    def __post_init__(self):
        if self.base.period != 1:
            raise PreconditionError("orbit words are based at fixed points")
        if self.base.classification != "repelling":
            raise PreconditionError("orbit words are based at repelling fixed points")
        if not (self.sigma > 0.0):
            raise PreconditionError("sigma must be positive")
        if self.tail_rule != "nearest":
            raise ConfigError(f"unknown tail rule {self.tail_rule!r}")
        eps = quadratic_epsilon(self.map)
        if eps is not None:
            bad = set(self.prefix) - set("+-")
            if bad:
                raise ConfigError(f"quadratic-family symbols are '+'/'-', got {bad}")
        else:
            d = self.map.degree
            if d > 10:
                raise ConfigError("digit symbols support degree <= 10 only")
            for ch in self.prefix:
                if not ch.isdigit() or int(ch) >= d:
                    raise ConfigError(f"symbol {ch!r} is not a branch index below {d}")

    def to_json(self) -> dict:
        eps = quadratic_epsilon(self.map)
        head: dict = {}
        if eps is not None:
            head["epsilon"] = [eps.real, eps.imag]
        else:
            head["map"] = self.map.to_json()
            head["base"] = [self.base.location.real, self.base.location.imag]
        head["prefix"] = self.prefix
        head["sigma"] = self.sigma
        head["tail_rule"] = self.tail_rule
        return head


@dataclass(frozen=True)
class RealizedOrbit:
    """A realized backward orbit: points[j] approximates y_{-j}."""

    word: OrbitWord
    depth: int
    points: tuple[complex, ...]
    choices: str
    entry_index: int | None  # first depth from which every point stays in the disk

    def distances(self) -> list[float]:
        a = self.word.base.location
        return [abs(p - a) for p in self.points]

    def tail_contraction(self) -> float | None:
        """Largest measured step ratio |y_{-j-1} - a| / |y_{-j} - a| past
        entry, over steps still above the double-precision noise floor."""
        if self.entry_index is None:
            return None
        d = self.distances()
        ratios = [
            d[j + 1] / d[j]
            for j in range(max(self.entry_index, 1), self.depth)
            if d[j] > 1e-10
        ]
        return max(ratios) if ratios else None


def _quadratic_candidates(w: complex, eps: complex, depth: int):
    s = cmath.sqrt(w - eps)
    if 2.0 * abs(s) < COLLISION_TOL * max(1.0, abs(s)):
        raise DegenerateBranchError(
            f"inverse branches collide at depth {depth}: both preimages of"
            f" {w!r} coincide at {s!r}"
        )
    return [(s, "+"), (-s, "-")]


def _general_candidates(f: RationalMap, w: complex, depth: int):
    roots = preimage_points(f, w)
    if len(roots) >= 2:
        scale = 1.0 + max(abs(r) for r in roots)
        rs = sorted(roots, key=lambda z: (z.real, z.imag))
        for i in range(len(rs) - 1):
            if abs(rs[i + 1] - rs[i]) < COLLISION_TOL * scale:
                raise DegenerateBranchError(
                    f"inverse branches collide at depth {depth} over {w!r}"
                )
    return [(r, str(i)) for i, r in enumerate(roots)]


def _nearest_to(cands, target: complex):
    dmin = min(abs(z - target) for z, _ in cands)
    ties = [(z, s) for z, s in cands if abs(z - target) <= dmin + 1e-12 * (1.0 + dmin)]
    return max(ties, key=lambda zs: (zs[0].imag, zs[0].real))


def realize(word: OrbitWord, depth: int) -> RealizedOrbit:
    """Realize the word to the given depth.

    The prefix is applied symbol by symbol, then the nearest-to-a tail
    rule takes over.  Every step is validated: the forward residual
    |f(y_{-j-1}) - y_{-j}| must stay below 1e-12 (relative), colliding
    branches raise, and once the orbit has had room to settle it must
    actually enter D_sigma(a) and contract monotonically, else the word
    is reported divergent.
    """
    if depth < len(word.prefix):
        raise PreconditionError(
            f"depth {depth} is shorter than the prefix ({len(word.prefix)} symbols)"
        )
    f = word.map
    eps = quadratic_epsilon(f)
    a = word.base.location
    pts: list[complex] = [a]
    choices: list[str] = []
    for j in range(depth):
        w = pts[-1]
        if eps is not None:
            cands = _quadratic_candidates(w, eps, j + 1)
        else:
            cands = _general_candidates(f, w, j + 1)
        if j < len(word.prefix):
            sym = word.prefix[j]
            match = [z for z, s in cands if s == sym]
            if not match:
                raise DomainError(
                    f"branch {sym!r} unavailable at depth {j + 1}"
                    f" (map has {len(cands)} finite preimages there)"
                )
            z = match[0]
        else:
            z, sym = _nearest_to(cands, a)
        pts.append(z)
        choices.append(sym)
    for j in range(depth):
        res = abs(f(pts[j + 1]) - pts[j])
        if res > RESIDUAL_TOL * max(1.0, abs(pts[j])):
            raise ConstructionError(
                f"backward step at depth {j + 1} fails the residual check:"
                f" {res:.3e}"
            )
    entry = _entry_index(pts, a, word.sigma)
    if entry is None and depth - len(word.prefix) >= DIVERGENCE_GRACE:
        raise DivergentWordError(
            f"tail did not settle into the sigma-disk within depth {depth}"
        )
    if entry is not None:
        _check_tail_monotone(pts, a, entry, depth)
    return RealizedOrbit(word, depth, tuple(pts), "".join(choices), entry)


def _entry_index(pts, a, sigma) -> int | None:
    last_outside = -1
    for j, p in enumerate(pts):
        if abs(p - a) >= sigma:
            last_outside = j
    entry = last_outside + 1
    if len(pts) - entry < TAIL_CONFIRM + 1:
        return None
    return entry


def _check_tail_monotone(pts, a, entry, depth):
    for j in range(max(entry, 1), depth):
        d0, d1 = abs(pts[j] - a), abs(pts[j + 1] - a)
        if d1 > max(d0 * (1.0 + 1e-9), 1e-14):
            raise DivergentWordError(
                f"in-disk tail fails to contract at depth {j + 1}:"
                f" {d0:.3e} -> {d1:.3e}"
            )


@dataclass(frozen=True)
class PiMembership:
    member: bool
    reason: str  # "ok" | "fixed-orbit" | "critical-hit" | "no-tail-convergence"


def is_in_Pi_a(word: OrbitWord, depth: int) -> PiMembership:
    """Does the word define an admissible backward orbit distinct from
    the fixed orbit, avoiding critical points, with a convergent tail?

    The all-principal word realizes the constant orbit at a and is
    excluded.  A realized point within 1e-8 of any critical point (or a
    branch collision while realizing, which is the same event seen one
    step earlier) rejects with reason "critical-hit".
    """
    try:
        orb = realize(word, depth)
    except DegenerateBranchError:
        return PiMembership(False, "critical-hit")
    except DivergentWordError:
        return PiMembership(False, "no-tail-convergence")
    a = word.base.location
    scale = 1.0 + abs(a)
    if all(abs(p - a) <= 1e-12 * scale for p in orb.points):
        return PiMembership(False, "fixed-orbit")
    for c in word.map.critical_points():
        for p in orb.points:
            if abs(p - c) <= CRITICAL_PROXIMITY:
                return PiMembership(False, "critical-hit")
    if orb.entry_index is None:
        return PiMembership(False, "no-tail-convergence")
    return PiMembership(True, "ok")


def principal_symbol(word: OrbitWord) -> str:
    """The symbol of the a-fixing branch at a (constant in depth, since
    the principal prefix keeps the orbit at a)."""
    if quadratic_epsilon(word.map) is not None:
        return "+"
    a = word.base.location
    roots = preimage_points(word.map, a)
    best = min(range(len(roots)), key=lambda i: abs(roots[i] - a))
    return str(best)


def shift(word: OrbitWord, n: int) -> OrbitWord:
    """Shift the word n steps (positive: deeper, prepending principal
    symbols; negative: toward the root, which must only consume
    principal symbols or the shifted word would leave the leaf of a)."""
    if n == 0:
        return word
    psym = principal_symbol(word)
    if n > 0:
        return dataclasses.replace(word, prefix=psym * n + word.prefix)
    k = -n
    head = word.prefix[:k]
    if any(s != psym for s in head):
        raise DomainError(
            "negative shift consumes a non-principal symbol; the shifted"
            " word would not stay in the leaf of a"
        )
    return dataclasses.replace(word, prefix=word.prefix[k:])


def fixed_word(word: OrbitWord) -> OrbitWord:
    """The all-principal word over the same base (realizes the fixed orbit)."""
    return dataclasses.replace(word, prefix="")


def concatenate(y: OrbitWord, c: OrbitWord, junction_depth: int) -> OrbitWord:
    """Graft c onto y at a depth where y has already settled at a.

    The new word replays y's realized choices through the junction and
    then follows c's prefix; because y is in the disk at the junction,
    the grafted branches track c's orbit.  Requires both words to share
    the base and the junction to sit at or past y's entry index.
    """
    if y.map != c.map or y.sigma != c.sigma or y.base.location != c.base.location:
        raise PreconditionError("concatenation requires words over the same base")
    if junction_depth < 0:
        raise PreconditionError("junction depth must be nonnegative")
    probe_depth = max(junction_depth, len(y.prefix)) + TAIL_CONFIRM + 1
    orb = realize(y, probe_depth)
    if orb.entry_index is None or orb.entry_index > junction_depth:
        raise PreconditionError(
            f"junction depth {junction_depth} is above y's certified entry"
            f" index ({orb.entry_index})"
        )
    new = dataclasses.replace(y, prefix=orb.choices[:junction_depth] + c.prefix)
    check_depth = junction_depth + len(c.prefix) + DIVERGENCE_GRACE + TAIL_CONFIRM
    mem = is_in_Pi_a(new, check_depth)
    if not mem.member:
        raise DomainError(f"concatenated word fails membership: {mem.reason}")
    return new
