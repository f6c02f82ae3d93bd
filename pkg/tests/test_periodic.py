import cmath
import math

import pytest

from horolab.errors import ConstructionError, PreconditionError
from horolab.maps import RationalMap, evaluate
from horolab.periodic import (
    all_roots,
    build_linearizer,
    classify,
    collinearity_in_linearizer,
    make_periodic_point,
    periodic_points,
    preimage_points,
)


def quad(eps):
    return RationalMap(num=(eps, 0, 1), den=(1,))


def test_all_roots_quadratic_factorization():
    # (z - 2)(z + 3) = z^2 + z - 6
    roots = all_roots((-6, 1, 1))
    assert abs(roots[0].value + 3) < 1e-9
    assert abs(roots[1].value - 2) < 1e-9
    assert all(r.multiplicity == 1 for r in roots)


def test_all_roots_of_unity():
    n = 7
    coeffs = (-1,) + (0,) * (n - 1) + (1,)
    roots = all_roots(coeffs)
    assert len(roots) == n
    for r in roots:
        assert abs(r.value ** n - 1) < 1e-8


def test_all_roots_double_root_clustered():
    # (z - 1)^2 = z^2 - 2z + 1
    roots = all_roots((1, -2, 1))
    assert len(roots) == 1
    assert roots[0].multiplicity == 2
    assert abs(roots[0].value - 1) < 1e-6


def test_classification_tags():
    assert classify(0.0) == "superattracting"
    assert classify(0.5) == "attracting"
    assert classify(3.0) == "repelling"
    assert classify(1.0) == "parabolic"
    assert classify(cmath.exp(2j)) == "indifferent"


def test_fixed_points_of_squaring_map():
    pts = periodic_points(quad(0.0), 1)
    locs = sorted((p.location for p in pts), key=lambda z: z.real)
    assert abs(locs[0]) < 1e-9 and abs(locs[1] - 1) < 1e-9
    by_loc = {round(p.location.real): p for p in pts}
    assert by_loc[0].classification == "superattracting"
    assert by_loc[1].classification == "repelling"
    assert abs(by_loc[1].multiplier - 2) < 1e-9


def test_periodic_points_squaring_map_period_2_and_3():
    """For z**2 the period-n points are the (2**n - 1)-th roots of unity
    of exact order; period 2 gives the primitive cube roots, period 3 the
    primitive 7th roots."""
    f = quad(0.0)
    p2 = periodic_points(f, 2)
    assert len(p2) == 2
    for p in p2:
        assert abs(p.location ** 3 - 1) < 1e-8
        assert abs(p.location - 1) > 0.5
    p3 = periodic_points(f, 3)
    assert len(p3) == 6
    for p in p3:
        assert abs(p.location ** 7 - 1) < 1e-8
        assert p.classification == "repelling"


def test_minimal_period_filter():
    # fixed points must not reappear as period-2 points
    f = quad(-1.0)
    locs2 = [p.location for p in periodic_points(f, 2)]
    for q in periodic_points(f, 1):
        assert all(abs(q.location - z) > 1e-6 for z in locs2)


def test_make_periodic_point_polishes_residual():
    f = quad(-1.0)
    a = (1 + math.sqrt(5)) / 2
    p = make_periodic_point(f, a + 1e-7, 1)
    assert abs(evaluate(f, p.location) - p.location) < 1e-11
    assert p.classification == "repelling"


def test_make_periodic_point_rejects_non_periodic():
    with pytest.raises(ConstructionError):
        make_periodic_point(quad(-1.0), 0.3 + 0.4j, 1)


def test_linearizer_rejects_attracting_base():
    f = quad(0.0)
    p = make_periodic_point(f, 0.0, 1)
    with pytest.raises(PreconditionError):
        build_linearizer(f, p)


def test_preimage_points_deterministic_order():
    f = quad(0.1)
    a = preimage_points(f, 0.5)
    b = preimage_points(f, 0.5)
    assert a == b
    for r in a:
        assert abs(evaluate(f, r) - 0.5) < 1e-9


def test_linearizer_functional_equation():
    for eps in (-3.0, -1.0, 0.1):
        f = quad(eps)
        a = (1 + cmath.sqrt(1 - 4 * eps)) / 2
        p = make_periodic_point(f, a, 1)
        lin = build_linearizer(f, p)
        worst = 0.0
        for k in range(12):
            z = complex(p.location) + lin.radius * 0.4 * cmath.exp(1j * k)
            worst = max(worst, abs(lin(evaluate(f, z)) - lin.multiplier * lin(z)))
        assert worst < 1e-9


def test_linearizer_normalized_derivative():
    f = quad(-1.0)
    a = (1 + math.sqrt(5)) / 2
    lin = build_linearizer(f, make_periodic_point(f, a, 1))
    h = 1e-6
    slope = (lin(a + h) - lin(a - h)) / (2 * h)
    assert abs(slope - 1) < 1e-5
    assert abs(lin(a)) < 1e-12


def test_collinearity_dichotomy():
    f3 = quad(-3.0)
    a3 = make_periodic_point(f3, (1 + math.sqrt(13)) / 2, 1)
    rep3 = collinearity_in_linearizer(f3, build_linearizer(f3, a3), depth=6)
    assert rep3.verdict == "line"
    assert rep3.max_deviation < 1e-8 * rep3.spread

    f1 = quad(-1.0)
    a1 = make_periodic_point(f1, (1 + math.sqrt(5)) / 2, 1)
    rep1 = collinearity_in_linearizer(f1, build_linearizer(f1, a1), depth=6)
    assert rep1.verdict == "full"
    assert rep1.max_deviation > 0.01


def test_power_map_flagged_exceptional():
    f = quad(0.0)
    a = make_periodic_point(f, 1.0, 1)
    rep = collinearity_in_linearizer(f, build_linearizer(f, a), depth=5)
    assert rep.exceptional_family_flag
