"""The quantitative acceptance battery.

Thirteen numbered checks, each a pure function of a seed returning a
CriterionResult whose `details` dict is deterministic (no wall times,
no machine state) so a suite run serializes to byte-identical output
on reruns.  The checks pin the headline quantitative behavior of the
package: fixed-point identities, the branch-exceptional boundary, the
degenerate parameter, the sign law, Julia containment, the certified
sigma/delta floor, semigroup convergence, cocycle algebra, field
harmonicity, height-set density, the collinearity dichotomy, the
complex-perturbation regime, and determinism itself.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .cocycle import (
    basic_cocycle,
    cocycle_field,
    cocycle_vs_fixed,
    height_set,
    progression_density_check,
    semigroup_convergence,
    series_terms,
)
from .julia import inverse_iteration_sample
from .maps import evaluate
from .orbits import is_in_Pi_a, realize, shift
from .periodic import (
    build_linearizer,
    collinearity_in_linearizer,
    make_periodic_point,
)
from .quadratic import (
    branch_exceptional,
    build_B_epsilon,
    cocycle_lower_bound_check,
    default_sigma_delta,
    derivative_extremality_check,
    disk_containment_check,
    family_word,
    find_sigma,
    fixed_point_a,
    nested_decomposition_check,
    quadratic_map,
    sample_words,
)
from .reports import to_json_text

TERM_ZERO_FLOOR = 1e-14


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    ok: bool
    details: dict
    elapsed: float
    artifacts: dict  # raw tables/points for plot emission; not serialized


def _result(index, name, ok, details, t0, artifacts=None) -> CriterionResult:
    return CriterionResult(index, name, bool(ok), details, time.perf_counter() - t0, artifacts or {})


def criterion_1(seed: int) -> CriterionResult:
    """Fixed-point identity and repelling classification."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(1000):
        eps = complex(rng.uniform(-3.0, 0.2), rng.uniform(-1.0, 1.0))
        a = fixed_point_a(eps)
        res = max(res, abs(evaluate(quadratic_map(eps), a) - a))
    mult_err = 0.0
    tags = []
    for e in (-3.0, -1.0, -0.5, 0.1, 0.2):
        a = fixed_point_a(e)
        p = make_periodic_point(quadratic_map(e), a, 1)
        tags.append(p.classification)
        mult_err = max(mult_err, abs(p.multiplier - 2.0 * a))
    ok = res < 1e-12 and all(t == "repelling" for t in tags) and mult_err < 1e-9
    return _result(
        1,
        "fixed-point identity and classification",
        ok,
        {
            "n_parameters": 1000,
            "max_fixed_point_residual": res,
            "classifications": tags,
            "max_multiplier_error": mult_err,
        },
        t0,
    )


def criterion_2(seed: int) -> CriterionResult:
    """Branch-exceptional boundary and critical-hit rejection."""
    t0 = time.perf_counter()
    grid = [-3.8 + 0.004 * k for k in range(1000)]
    hits = [e for e in grid if branch_exceptional(e)]
    grid_ok = len(hits) == 1 and abs(hits[0] + 2.0) < 1e-9
    candidates = ["-", "-+", "--", "+-"]
    reasons = []
    for p in candidates:
        m = is_in_Pi_a(family_word(-2.0, p, sigma=0.5), 3)
        reasons.append(m.reason if not m.member else "accepted")
    cand_ok = all(r == "critical-hit" for r in reasons)
    return _result(
        2,
        "branch-exceptional boundary",
        grid_ok and cand_ok,
        {
            "grid_size": 1000,
            "exceptional_parameters": [complex(h) for h in hits],
            "candidate_prefixes": candidates,
            "rejection_reasons": reasons,
            "rejection_depth": 3,
        },
        t0,
    )


def criterion_3(seed: int) -> CriterionResult:
    """Degenerate parameter: vanishing cocycle, ln-2 ladder."""
    t0 = time.perf_counter()
    words = sample_words(0.0, 200, seed)
    max_beta = max(abs(cocycle_vs_fixed(w, 1e-12).value) for w in words)
    rep = height_set(words, (-40, 40), 1e-12, window=(0.0, 1.0))
    gap_err = abs(rep.max_gap - math.log(2.0))
    ok = max_beta < 1e-10 and gap_err < 1e-9
    return _result(
        3,
        "degenerate parameter ladder",
        ok,
        {
            "n_words": 200,
            "max_abs_beta": max_beta,
            "height_count": rep.count,
            "max_gap": rep.max_gap,
            "gap_error_vs_ln2": gap_err,
        },
        t0,
        {"heights": [v for v, _ in rep.values], "window": rep.window},
    )


def criterion_4(seed: int) -> CriterionResult:
    """Sign law with term-level agreement."""
    t0 = time.perf_counter()
    details = {}
    ok = True
    for eps, want_pos in ((0.1, True), (-1.0, False)):
        words = sample_words(eps, 200, seed)
        betas = [cocycle_vs_fixed(w, 1e-12) for w in words]
        signs_ok = all((b.value > 0) == want_pos and b.value != 0 for b in betas)
        terms_ok = True
        for w, b in zip(words, betas):
            for term in series_terms(w, b.depth_used):
                if abs(term) <= TERM_ZERO_FLOOR:
                    continue
                if (term > 0) != want_pos:
                    terms_ok = False
        ok = ok and signs_ok and terms_ok
        key = "pos" if want_pos else "neg"
        details[f"{key}_epsilon"] = eps
        details[f"{key}_n_words"] = len(words)
        details[f"{key}_sign_ok"] = signs_ok
        details[f"{key}_terms_ok"] = terms_ok
        details[f"{key}_extreme_beta"] = (
            min(b.value for b in betas) if want_pos else max(b.value for b in betas)
        )
    details["term_zero_floor"] = TERM_ZERO_FLOOR
    return _result(4, "cocycle sign law", ok, details, t0)


def criterion_5(seed: int) -> CriterionResult:
    """Julia containment against the critical circle."""
    t0 = time.perf_counter()
    details = {}
    ok = True
    points_neg = None
    for eps in (-1.0, 0.1):
        sample = inverse_iteration_sample(quadratic_map(eps), 10000, 40, seed)
        rep = disk_containment_check(eps, sample, 1e-6)
        ext = derivative_extremality_check(eps, sample, 1e-6)
        ok = ok and not rep.violations and not rep.proximity_failures and not ext.violations
        key = "neg" if eps < 0 else "pos"
        details[f"{key}_epsilon"] = eps
        details[f"{key}_n_points"] = rep.n
        details[f"{key}_violations"] = len(rep.violations)
        details[f"{key}_near_boundary"] = len(rep.near_boundary)
        details[f"{key}_proximity_failures"] = len(rep.proximity_failures)
        details[f"{key}_max_excess"] = rep.max_excess
        details[f"{key}_derivative_violations"] = len(ext.violations)
        if eps < 0:
            points_neg = (list(sample.points), rep.radius)
    return _result(
        5,
        "Julia containment",
        ok,
        details,
        t0,
        {"points": points_neg[0], "radius": points_neg[1]},
    )


def criterion_6(seed: int) -> CriterionResult:
    """Certified sigma/delta and the excursion lower bound."""
    t0 = time.perf_counter()
    details = {}
    ok = True
    for eps in (0.1, -1.0):
        sd = default_sigma_delta(eps, seed)
        words = sample_words(eps, 200, seed)
        checks = [cocycle_lower_bound_check(w, sd, 1e-12) for w in words]
        bound_ok = all(c.ok for c in checks)
        brep = build_B_epsilon(eps, 15, 2, 1e-12, seed)
        min_B = min(abs(v) for v, _ in brep.values)
        ok = ok and sd.delta > 0 and bound_ok and min_B > sd.delta
        key = "pos" if eps > 0 else "neg"
        details[f"{key}_epsilon"] = eps
        details[f"{key}_sigma"] = sd.sigma
        details[f"{key}_delta"] = sd.delta
        details[f"{key}_bound_ok"] = bound_ok
        details[f"{key}_min_margin"] = min(c.margin for c in checks)
        details[f"{key}_min_abs_B"] = min_B
        details[f"{key}_B_count"] = brep.count
    return _result(6, "sigma/delta excursion bound", ok, details, t0)


def _paired_words(eps: float, seed: int, n_pairs: int, junction_floor: int):
    """Word pairs (y, c) with y entering the certified disk early enough
    to concatenate at the smallest junction."""
    words = sample_words(eps, 3 * n_pairs, seed, max_len=6)
    ys = []
    cs = []
    for w in words:
        orb = realize(w, len(w.prefix) + 30)
        if len(ys) < n_pairs and orb.entry_index is not None and orb.entry_index <= junction_floor:
            ys.append(w)
        else:
            cs.append(w)
    if len(ys) < n_pairs or len(cs) < n_pairs:
        raise AssertionError("word sample too small for the requested pair count")
    return list(zip(ys, cs[:n_pairs]))


def criterion_7(seed: int) -> CriterionResult:
    """Semigroup convergence: monotone defect decay and the nested sum."""
    t0 = time.perf_counter()
    junctions = [10, 20, 30, 40, 50]
    pairs = _paired_words(0.1, seed, 20, junction_floor=10)
    all_monotone = True
    all_final = True
    nested_ok = True
    tables = []
    worst_final = 0.0
    worst_nested = 0.0
    for y, c in pairs:
        tab = semigroup_convergence(y, c, junctions, 1e-12)
        mono = all(b < a for a, b in zip(tab.defects, tab.defects[1:]))
        all_monotone = all_monotone and mono
        all_final = all_final and tab.defects[-1] < 1e-8
        worst_final = max(worst_final, tab.defects[-1])
        nd = nested_decomposition_check(y, c, 35, 1e-12)
        nested_ok = nested_ok and nd.defects[0] < 1e-6
        worst_nested = max(worst_nested, nd.defects[0])
        tables.append((y.prefix, c.prefix, tab))
    ok = all_monotone and all_final and nested_ok
    return _result(
        7,
        "semigroup convergence",
        ok,
        {
            "n_pairs": len(pairs),
            "junctions": junctions,
            "all_monotone": all_monotone,
            "worst_final_defect": worst_final,
            "nested_junction": 35,
            "worst_nested_defect": worst_nested,
        },
        t0,
        {"tables": tables},
    )


def criterion_8(seed: int) -> CriterionResult:
    """Cocycle algebra: antisymmetry, identity, shift invariance."""
    t0 = time.perf_counter()
    tol = 1e-12
    words = sample_words(0.1, 30, seed, max_len=8)
    rng = np.random.default_rng(seed + 1)
    worst_anti = worst_ident = worst_shift = 0.0
    for _ in range(100):
        i, j, k = (int(v) for v in rng.integers(0, len(words), size=3))
        x, y, z = words[i], words[j], words[k]
        bxy = basic_cocycle(x, y, tol).value
        worst_anti = max(worst_anti, abs(bxy + basic_cocycle(y, x, tol).value))
        worst_ident = max(
            worst_ident,
            abs(bxy + basic_cocycle(y, z, tol).value - basic_cocycle(x, z, tol).value),
        )
        worst_shift = max(
            worst_shift, abs(basic_cocycle(shift(x, 1), shift(y, 1), tol).value - bxy)
        )
    ok = worst_anti <= 3 * tol and worst_ident <= 3 * tol and worst_shift <= 3 * tol
    return _result(
        8,
        "cocycle algebra",
        ok,
        {
            "n_checks": 100,
            "tolerance": tol,
            "worst_antisymmetry": worst_anti,
            "worst_identity": worst_ident,
            "worst_shift_invariance": worst_shift,
        },
        t0,
    )


def criterion_9(seed: int) -> CriterionResult:
    """Field harmonicity (mean value) and nonconstance (variance)."""
    t0 = time.perf_counter()
    eps = 0.1
    a = fixed_point_a(eps)
    sigma, _ = find_sigma(eps)
    c = family_word(eps, "-")
    z0 = a + 0.3 * sigma
    center = cocycle_field(c, z0, 1e-12)
    r = sigma / 10.0
    ring = [
        cocycle_field(c, z0 + r * complex(math.cos(2 * math.pi * k / 16), math.sin(2 * math.pi * k / 16)), 1e-12)
        for k in range(16)
    ]
    residual = abs(sum(ring) / 16.0 - center)
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < 50:
        u, v = rng.uniform(-1, 1), rng.uniform(-1, 1)
        if u * u + v * v < 0.25:
            pts.append(a + sigma * complex(u, v))
    vals = [cocycle_field(c, p, 1e-12) for p in pts]
    mean = sum(vals) / len(vals)
    variance = sum((v - mean) ** 2 for v in vals) / len(vals)
    ok = residual < 1e-6 and variance > 1e-10
    return _result(
        9,
        "field harmonicity and nonconstance",
        ok,
        {
            "epsilon": eps,
            "ring_points": 16,
            "mean_value_residual": residual,
            "sample_points": 50,
            "variance": variance,
        },
        t0,
    )


def criterion_10(seed: int) -> CriterionResult:
    """Height-set density and the two-value progression."""
    t0 = time.perf_counter()
    eps = -1.0
    words = sample_words(eps, 500, seed, max_len=12)
    rep = height_set(words, (-40, 40), 1e-12, window=(0.0, 1.0))
    betas = sorted(set(round(cocycle_vs_fixed(w, 1e-12).value, 14) for w in words))
    b1, b2 = min(zip(betas, betas[1:]), key=lambda p: p[1] - p[0])
    lam = abs(2.0 * fixed_point_a(eps))
    prog = progression_density_check([b1, b2], math.log(lam), (0.0, 1.0), 0.05)
    ok = rep.max_gap < 0.1 and prog.ok
    return _result(
        10,
        "height-set density",
        ok,
        {
            "epsilon": eps,
            "n_words": 500,
            "height_count": rep.count,
            "max_gap": rep.max_gap,
            "closest_betas": [b1, b2],
            "progression_ok": prog.ok,
            "progression_max_gap": prog.max_gap,
        },
        t0,
        {"heights": [v for v, _ in rep.values], "window": rep.window},
    )


def criterion_11(seed: int) -> CriterionResult:
    """Collinearity dichotomy and linearizer residual."""
    t0 = time.perf_counter()
    details = {}
    residual = 0.0
    verdicts = {}
    for eps in (-3.0, -1.0):
        f = quadratic_map(eps)
        p = make_periodic_point(f, fixed_point_a(eps), 1)
        lin = build_linearizer(f, p)
        rep = collinearity_in_linearizer(f, lin, depth=8)
        verdicts[eps] = rep
        for k in range(8):
            z = complex(p.location) + lin.radius * 0.5 * complex(math.cos(k), math.sin(k))
            residual = max(residual, abs(lin(evaluate(f, z)) - lin.multiplier * lin(z)))
        key = "line" if eps == -3.0 else "full"
        details[f"{key}_epsilon"] = eps
        details[f"{key}_verdict"] = rep.verdict
        details[f"{key}_max_deviation"] = rep.max_deviation
        details[f"{key}_spread"] = rep.spread
        details[f"{key}_n_points"] = rep.n_points
    details["linearizer_residual"] = residual
    r3, r1 = verdicts[-3.0], verdicts[-1.0]
    ok = (
        r3.verdict == "line"
        and r3.max_deviation < 1e-8 * r3.spread
        and r1.verdict == "full"
        and r1.max_deviation > 0.01
        and residual < 1e-9
    )
    return _result(11, "collinearity dichotomy", ok, details, t0)


def criterion_12(seed: int) -> CriterionResult:
    """Complex perturbation: sign follows Re epsilon, half-delta floor."""
    t0 = time.perf_counter()
    details = {}
    ok = True
    for eps_c, eps_r in ((0.1 + 0.02j, 0.1), (-1.0 + 0.02j, -1.0)):
        sd = default_sigma_delta(eps_r, seed)
        words = sample_words(eps_c, 200, seed, max_len=8)
        signs_ok = True
        bounds_ok = True
        min_margin = math.inf
        for w in words:
            bc = cocycle_lower_bound_check(w, sd, 1e-12)
            if (bc.beta.value > 0) != (eps_r > 0):
                signs_ok = False
            bounds_ok = bounds_ok and bc.ok
            min_margin = min(min_margin, bc.margin)
        ok = ok and signs_ok and bounds_ok
        key = "pos" if eps_r > 0 else "neg"
        details[f"{key}_epsilon"] = complex(eps_c)
        details[f"{key}_delta_used"] = 0.5 * sd.delta
        details[f"{key}_n_words"] = len(words)
        details[f"{key}_signs_ok"] = signs_ok
        details[f"{key}_bounds_ok"] = bounds_ok
        details[f"{key}_min_margin"] = min_margin
    return _result(12, "complex perturbation regime", ok, details, t0)


def criterion_13(seed: int, earlier: list[CriterionResult] | None = None) -> CriterionResult:
    """Determinism probe: serialization is stable and a randomized
    criterion reproduces its details under the same seed.  The full
    end-to-end guarantee is the byte-identity of two suite runs, which
    the acceptance test exercises through the command line."""
    t0 = time.perf_counter()
    payload = [{"index": r.index, "ok": r.ok, "details": r.details} for r in earlier or []]
    stable = to_json_text(payload) == to_json_text(payload)
    a = criterion_1(seed).details
    b = criterion_1(seed).details
    reproduced = to_json_text(a) == to_json_text(b)
    sample1 = inverse_iteration_sample(quadratic_map(-1.0), 500, 40, seed)
    sample2 = inverse_iteration_sample(quadratic_map(-1.0), 500, 40, seed)
    sampling = sample1.points == sample2.points
    ok = stable and reproduced and sampling
    return _result(
        13,
        "determinism",
        ok,
        {
            "serialization_stable": stable,
            "criterion_1_reproduced": reproduced,
            "sampling_reproduced": sampling,
        },
        t0,
    )


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
]

RUNTIME_CAPS = {
    1: 1.0,
    2: 5.0,
    3: 10.0,
    4: 30.0,
    5: 30.0,
    6: 60.0,
    7: 60.0,
    8: 30.0,
    9: 30.0,
    10: 120.0,
    11: 30.0,
    12: 60.0,
}


def run_battery(seed: int) -> list[CriterionResult]:
    """All thirteen checks, in registry order."""
    results = [fn(seed) for fn in CRITERIA]
    results.append(criterion_13(seed, results))
    return results
