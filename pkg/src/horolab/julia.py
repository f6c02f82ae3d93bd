"""Julia set sampling: escape tests, inverse iteration, repelling cycles.

The inverse-iteration sampler walks random backward paths from a
repelling fixed point; after a burn-in the visited points distribute
over the Julia set.  Branch randomness is seeded and consumed in a
fixed order (main sign matrix first, then per-path resampling draws),
so the sorted sample is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PreconditionError
from .maps import QuadraticParam, RationalMap, quadratic_epsilon
from .periodic import PeriodicPoint, periodic_points

BURN_IN = 20
COLLISION_RADIUS = 1e-8  # |sqrt(w - eps)| below this counts as a critical-value hit
MAX_RESAMPLE = 5
ESCAPE_BUDGET_MAX = 100000


@dataclass(frozen=True)
class JuliaSample:
    map_json: dict
    points: tuple[complex, ...]
    method: str  # "escape-boundary" | "inverse-iteration" | "repelling-periodic"
    params: dict


@dataclass(frozen=True)
class EscapeResult:
    status: str  # "inside-filled" | "escaped" | "undecided"
    steps: int


def escape_membership(param: QuadraticParam, z: complex, budget: int) -> EscapeResult:
    """Bounded-orbit test for the filled Julia set of z**2 + epsilon.

    |z| > max(2, |eps|) implies |z**2 + eps| >= |z|**2 - |eps| > |z|,
    so radius R = max(2, |eps|) + 1 certifies escape.
    """
    if budget > ESCAPE_BUDGET_MAX:
        raise ConfigError(f"escape budget exceeds the configured max {ESCAPE_BUDGET_MAX}")
    if budget <= 0:
        return EscapeResult("undecided", 0)
    eps = param.epsilon
    radius = max(2.0, abs(eps)) + 1.0
    w = z
    for n in range(budget + 1):
        if abs(w) > radius:
            return EscapeResult("escaped", n)
        w = w * w + eps
    return EscapeResult("inside-filled", budget)


def _starting_point(f: RationalMap) -> PeriodicPoint:
    eps = quadratic_epsilon(f)
    fixed = periodic_points(f, 1)
    if eps is not None:
        # prefer the distinguished fixed point (1 + sqrt(1 - 4 eps))/2
        import cmath

        a = (1.0 + cmath.sqrt(1.0 - 4.0 * eps)) / 2.0
        for p in fixed:
            if p.classification == "repelling" and abs(p.location - a) < 1e-6 * (1 + abs(a)):
                return p
    for p in fixed:
        if p.classification == "repelling":
            return p
    raise PreconditionError("inverse iteration needs a repelling fixed point")


def inverse_iteration_sample(
    f: RationalMap,
    n_points: int,
    depth: int,
    seed: int,
    burn_in: int = BURN_IN,
) -> JuliaSample:
    """Random backward orbits from a repelling fixed point, pooled.

    Quadratic-family only (closed-form inverse branches).  Paths whose
    branch choice hits the critical value (both preimages collide) are
    resampled with fresh seeded randomness; if collisions persist (they
    are unavoidable on some parameters, where the critical orbit lies
    in J itself) the path passes through the collision point, which is
    a genuine Julia point, and continues.
    """
    eps = quadratic_epsilon(f)
    if eps is None:
        raise ConfigError("inverse iteration is implemented for the quadratic family")
    if depth <= burn_in:
        raise ConfigError(f"depth must exceed the burn-in ({burn_in})")
    if n_points < 1:
        raise ConfigError("n_points must be positive")
    start = _starting_point(f)
    per_path = depth - burn_in
    n_paths = math.ceil(n_points / per_path)
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(n_paths, depth))
    pts, flagged = _run_paths(np.full(n_paths, start.location, dtype=complex), signs, eps, burn_in)
    n_resampled = int(np.count_nonzero(flagged))
    n_passthrough = 0
    for i in np.nonzero(flagged)[0]:
        cleared = False
        for _ in range(MAX_RESAMPLE):
            s = rng.integers(0, 2, size=(1, depth))
            row, bad = _run_paths(
                np.array([start.location], dtype=complex), s, eps, burn_in
            )
            pts[i] = row[0]
            if not bad[0]:
                cleared = True
                break
        if not cleared:
            n_passthrough += 1
    flat = [complex(z) for z in pts.reshape(-1)[: n_points]]
    flat.sort(key=lambda z: (z.real, z.imag))
    return JuliaSample(
        map_json=f.to_json(),
        points=tuple(flat),
        method="inverse-iteration",
        params={
            "n_points": n_points,
            "depth": depth,
            "seed": seed,
            "burn_in": burn_in,
            "resampled_paths": n_resampled,
            "passthrough_paths": n_passthrough,
        },
    )


def _run_paths(z0: np.ndarray, signs: np.ndarray, eps: complex, burn_in: int):
    """Vectorized backward iteration; returns (collected points, collision flags)."""
    n_paths, depth = signs.shape
    z = z0.copy()
    collected = np.empty((n_paths, depth - burn_in), dtype=complex)
    collided = np.zeros(n_paths, dtype=bool)
    for step in range(depth):
        s = np.sqrt(z - eps)
        collided |= np.abs(s) < COLLISION_RADIUS
        z = np.where(signs[:, step] == 1, s, -s)
        if step >= burn_in:
            collected[:, step - burn_in] = z
    return collected, collided


def repelling_sample(f: RationalMap, max_period: int) -> JuliaSample:
    """All repelling periodic points of period up to max_period."""
    if max_period < 1:
        raise ConfigError("max_period must be >= 1")
    pts: list[complex] = []
    for period in range(1, max_period + 1):
        for p in periodic_points(f, period):
            if p.classification == "repelling":
                pts.append(p.location)
    pts.sort(key=lambda z: (z.real, z.imag))
    return JuliaSample(
        map_json=f.to_json(),
        points=tuple(pts),
        method="repelling-periodic",
        params={"max_period": max_period},
    )
