"""Cocycle engine tests.

The reference values here come from a separate brute-force evaluator
(kept inline below) that realizes quadratic backward orbits with the
closed-form square-root recursion and sums the raw series to depth
2000.  It shares no code with the package engine, so agreement within
the engine's own reported tail bound is evidence the bound is honest.
"""

import cmath
import math

import pytest

from horolab.cocycle import (
    CocycleValue,
    HeightPoint,
    basic_cocycle,
    cocycle_field,
    cocycle_vs_fixed,
    height_set,
    make_density_report,
    progression_density_check,
    pushforward_height,
    semigroup_convergence,
    series_terms,
)
from horolab.errors import ConfigError, DomainError, PreconditionError
from horolab.quadratic import family_word, fixed_point_a

SEED_WORD_TOL = 1e-9


# --- independent brute-force evaluator -------------------------------------


def brute_orbit(eps, prefix, depth):
    a = (1 + cmath.sqrt(1 - 4 * eps)) / 2
    pts = [a]
    for j in range(depth):
        s = cmath.sqrt(pts[-1] - eps)
        cands = sorted([s, -s], key=lambda r: (abs(r - a), -r.imag, -r.real))
        if j < len(prefix):
            z = s if prefix[j] == "+" else -s
        else:
            z = cands[0]
        pts.append(z)
    return a, pts


def brute_beta(eps, prefix, depth=2000):
    a, pts = brute_orbit(eps, prefix, depth)
    return sum(math.log(abs(2 * p)) - math.log(abs(2 * a)) for p in pts[1:])


# frozen outputs of brute_beta at depth 2000
BRUTE = {
    (0.1, "-"): 0.45047942930981455,
    (-1.0, "-"): -1.2423743676001426,
    (0.0, "-"): -7.771561172376096e-16,
}


def test_brute_evaluator_reproduces_frozen_values():
    for (eps, prefix), frozen in BRUTE.items():
        assert brute_beta(eps, prefix) == pytest.approx(frozen, abs=1e-15)


def test_engine_matches_brute_force_within_tail_bound():
    for (eps, prefix), frozen in BRUTE.items():
        v = cocycle_vs_fixed(family_word(eps, prefix), SEED_WORD_TOL)
        assert abs(v.value - frozen) <= v.tail_bound + 1e-12
        assert v.tail_bound <= SEED_WORD_TOL


def test_tail_bound_tightens_with_tol():
    w = family_word(0.1, "-")
    loose = cocycle_vs_fixed(w, 1e-6)
    tight = cocycle_vs_fixed(w, 1e-11)
    assert tight.tail_bound < loose.tail_bound
    assert abs(tight.value - loose.value) <= loose.tail_bound + tight.tail_bound


def test_partial_sums_converge_to_value():
    w = family_word(0.1, "-")
    v = cocycle_vs_fixed(w, SEED_WORD_TOL)
    terms = series_terms(w, v.depth_used)
    assert abs(sum(terms) - v.value) < 1e-12
    deeper = series_terms(w, v.depth_used + 40)
    assert all(abs(t) < 1e-8 for t in deeper[v.depth_used :])


def test_identical_words_give_exact_zero():
    w = family_word(0.1, "-+")
    assert basic_cocycle(w, w, SEED_WORD_TOL) == CocycleValue(0.0, 0.0, 0)


def test_antisymmetry():
    x = family_word(0.1, "-")
    y = family_word(0.1, "--")
    xy = basic_cocycle(x, y, SEED_WORD_TOL)
    yx = basic_cocycle(y, x, SEED_WORD_TOL)
    assert abs(xy.value + yx.value) <= xy.tail_bound + yx.tail_bound + 1e-13


def test_additivity_chain():
    x = family_word(0.1, "-")
    y = family_word(0.1, "-+-")
    z = family_word(0.1, "--")
    xy = basic_cocycle(x, y, SEED_WORD_TOL)
    yz = basic_cocycle(y, z, SEED_WORD_TOL)
    xz = basic_cocycle(x, z, SEED_WORD_TOL)
    slack = xy.tail_bound + yz.tail_bound + xz.tail_bound + 1e-12
    assert abs(xy.value + yz.value - xz.value) <= slack


def test_tol_floor_enforced():
    w = family_word(0.1, "-")
    with pytest.raises(ConfigError):
        cocycle_vs_fixed(w, 1e-13)


def test_mismatched_bases_rejected():
    with pytest.raises(PreconditionError):
        basic_cocycle(family_word(0.1, "-"), family_word(-1.0, "-"), SEED_WORD_TOL)


def test_field_at_base_matches_plain_cocycle():
    c = family_word(0.1, "-")
    a = fixed_point_a(0.1)
    direct = cocycle_vs_fixed(c, SEED_WORD_TOL)
    at_a = cocycle_field(c, a, SEED_WORD_TOL)
    assert abs(at_a - direct.value) <= 2 * SEED_WORD_TOL


def test_field_rejects_points_outside_disk():
    c = family_word(0.1, "-")
    a = fixed_point_a(0.1)
    with pytest.raises(DomainError):
        cocycle_field(c, a + 2 * c.sigma, SEED_WORD_TOL)


def test_field_varies_over_the_disk():
    c = family_word(-1.0, "-")
    a = fixed_point_a(-1.0)
    vals = [
        cocycle_field(c, a + 0.3 * c.sigma * cmath.exp(1j * k), 1e-8)
        for k in range(6)
    ]
    assert max(vals) - min(vals) > 1e-6


def test_pushforward_moves_height_by_log_multiplier():
    w = family_word(0.1, "-")
    v = cocycle_vs_fixed(w, SEED_WORD_TOL)
    p = HeightPoint(w, v.value)
    q = pushforward_height(p, 3)
    lam = abs(w.base.multiplier)
    assert q.height == pytest.approx(v.value + 3 * math.log(lam))
    assert q.word.prefix == "+++-"


def test_density_report_counts_edge_gaps():
    rep = make_density_report([(0.5, 0.0)], (0.0, 1.0))
    assert rep.count == 1
    assert rep.max_gap == pytest.approx(0.5)
    empty = make_density_report([(5.0, 0.0)], (0.0, 1.0))
    assert empty.count == 0
    assert empty.max_gap == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        make_density_report([], (1.0, 1.0))


def test_height_set_rejects_fixed_orbit_word():
    with pytest.raises(PreconditionError):
        height_set([family_word(0.1, "")], (0, 3), SEED_WORD_TOL)


def test_height_set_fills_window():
    words = [family_word(0.1, p) for p in ("-", "--", "-+", "-+-", "--+")]
    rep = height_set(words, (-20, 20), SEED_WORD_TOL, window=(0.0, 1.0))
    assert rep.count >= 5
    assert rep.max_gap < 1.0
    vals = [v for v, _ in rep.values]
    assert vals == sorted(vals)
    assert all(0.0 <= v <= 1.0 for v in vals)


def test_semigroup_defect_decays_geometrically():
    y = family_word(0.1, "-")
    c = family_word(0.1, "--")
    table = semigroup_convergence(y, c, [8, 12, 16, 20, 24, 28], SEED_WORD_TOL)
    assert all(b < a for a, b in zip(table.defects, table.defects[1:]))
    assert table.defects[-1] < 1e-5
    # observed per-step decay tracks 1/|multiplier| = 0.5635
    assert table.rate is not None
    assert 0.50 < table.rate < 0.63
    expected = table.beta_y.value + table.beta_c.value
    assert abs(table.betas[-1].value - expected) < 1e-5


def test_semigroup_rejects_unsorted_junctions():
    y = family_word(0.1, "-")
    c = family_word(0.1, "--")
    with pytest.raises(PreconditionError):
        semigroup_convergence(y, c, [12, 8], SEED_WORD_TOL)


def test_progression_two_generators_fill_unit_window():
    rep = progression_density_check([0.30, 0.31], 1.0, (0.0, 1.0), 0.02)
    assert rep.ok
    assert rep.max_gap <= 0.02


def test_progression_single_commensurate_generator_leaves_gaps():
    rep = progression_density_check([math.log(2)], math.log(2), (0.0, 1.0), 0.1)
    assert not rep.ok
    assert rep.max_gap > 0.3


def test_progression_guards():
    with pytest.raises(PreconditionError):
        progression_density_check([], 1.0, (0.0, 1.0), 0.1)
    with pytest.raises(PreconditionError):
        progression_density_check([0.5], 0.0, (0.0, 1.0), 0.1)
    with pytest.raises(ConfigError):
        progression_density_check([0.1] * 30, 1.0, (0.0, 1.0), 0.1, sum_budget=500)
