import itertools
import random

from mirrorkit.ci_model import ChargeMatrix, WeightSystem, charges, derive_weights
from mirrorkit.poincare import (
    CyclotomicRatio,
    poincare_euler,
    poincare_structure,
    ratio_equal,
    series_coefficients_1d,
    series_expand,
    verify_duality,
)
from mirrorkit.transposition import transpose_spec
from mirrorkit.pipeline import generate_family
from mirrorkit.horn_system import m_function


def brute_force_weighted_count(weights, order):
    """Independent oracle: number of monomials of each weighted degree."""
    counts = [0] * (order + 1)

    def rec(idx, total):
        if total > order:
            return
        if idx == len(weights):
            counts[total] += 1
            return
        e = 0
        while total + e * weights[idx] <= order:
            rec(idx + 1, total + e * weights[idx])
            e += 1

    rec(0, 0)
    return counts


def test_poincare_structure_6_2(spec_6_2):
    w = derive_weights(spec_6_2)
    ratio = poincare_structure(w, charges(spec_6_2, w))
    assert ratio == CyclotomicRatio.build(
        1, [(1, 21)], [(1, 3), (1, 2), (1, 2), (1, 7), (1, 7)])


def test_poincare_structure_quadric(quadric):
    w = derive_weights(quadric)
    assert poincare_structure(w, charges(quadric, w)) == \
        CyclotomicRatio.build(1, [(1, 2)], [(1, 1), (1, 1)])


def test_poincare_formal_cancellation():
    w = WeightSystem(((4,),))
    q = ChargeMatrix(((4,),))
    assert poincare_structure(w, q) == CyclotomicRatio.one(1)


def test_poincare_euler_quadric(quadric):
    tr = transpose_spec(quadric)
    tw = derive_weights(tr.tspec)
    assert poincare_euler(tw, charges(tr.tspec, tw)) == \
        CyclotomicRatio.build(1, [(1, 2)], [(1, 1), (1, 1)])


def test_empty_ratio_is_one():
    assert CyclotomicRatio.one(0).num == ()
    assert series_expand(CyclotomicRatio.one(0), 3) == {(): 1}


def test_ratio_equal_reflexive(spec_6_2):
    w = derive_weights(spec_6_2)
    ratio = poincare_structure(w, charges(spec_6_2, w))
    assert ratio_equal(ratio, ratio)


def test_ratio_equal_mx_vs_p_a_y(spec_6_2):
    tr = transpose_spec(spec_6_2)
    tw = derive_weights(tr.tspec)
    tq = charges(tr.tspec, tw)
    assert ratio_equal(m_function(tw, tq), poincare_structure(tw, tq))


def test_ratio_equal_cancellation_aware():
    a = CyclotomicRatio.build(1, [(1, 2), (1, 5)], [(1, 1), (1, 5)])
    b = CyclotomicRatio.build(1, [(1, 2)], [(1, 1)])
    assert a == b  # canonical cancellation
    assert ratio_equal(a, b)
    c = CyclotomicRatio.build(1, [(1, 3)], [(1, 1)])
    assert not ratio_equal(b, c)


def test_ratio_equal_equivalence_properties():
    rng = random.Random(5)
    ratios = []
    for _ in range(8):
        num = [(1, rng.randint(1, 4)) for _ in range(rng.randint(0, 2))]
        den = [(1, rng.randint(1, 4)) for _ in range(rng.randint(0, 2))]
        ratios.append(CyclotomicRatio.build(1, num, den))
    for a, b, c in itertools.product(ratios, repeat=3):
        assert ratio_equal(a, a)
        if ratio_equal(a, b):
            assert ratio_equal(b, a)
        if ratio_equal(a, b) and ratio_equal(b, c):
            assert ratio_equal(a, c)


def test_series_expand_geometric():
    ratio = CyclotomicRatio.build(1, [(1, 2)], [(1, 1), (1, 1)])
    assert series_coefficients_1d(ratio, 3) == [1, 2, 2, 2]


def test_series_expand_constant():
    assert series_expand(CyclotomicRatio.one(1), 5) == {(0,): 1}


def test_series_expand_rejects_degenerate_denominator():
    from mirrorkit.poincare import NotExpandableError
    import pytest
    bad = CyclotomicRatio(1, (), ((1, 0),))  # bypasses canonical construction
    with pytest.raises(NotExpandableError):
        series_expand(bad, 3)


def test_series_expand_6_2_matches_enumeration(spec_6_2):
    w = derive_weights(spec_6_2)
    ratio = poincare_structure(w, charges(spec_6_2, w))
    # brute-force enumeration under weights (3,2,2,7,7); the degree-21
    # relation cannot affect orders <= 7
    oracle = brute_force_weighted_count((3, 2, 2, 7, 7), 7)
    assert oracle == [1, 0, 2, 1, 3, 2, 5, 5]
    assert series_coefficients_1d(ratio, 7) == oracle


def test_series_coefficients_nonnegative(spec_6_1, spec_6_2, quadric):
    for spec in (spec_6_1, spec_6_2, quadric):
        w = derive_weights(spec)
        ratio = poincare_structure(w, charges(spec, w))
        table = series_expand(ratio, 6)
        assert all(c >= 0 for c in table.values())


def test_degree_balance(spec_6_1, spec_6_2, quadric):
    for spec in (spec_6_1, spec_6_2, quadric):
        w = derive_weights(spec)
        assert poincare_structure(w, charges(spec, w)).degree_balanced()


def test_verify_duality_positive_cases(spec_6_1, spec_6_2, quadric):
    for spec in (spec_6_1, spec_6_2, quadric,
                 generate_family(3), generate_family(4), generate_family(5)):
        report = verify_duality(spec, transpose_spec(spec))
        assert report.ok, (spec, report)


def test_verify_duality_corrupted_weights(corrupted):
    report = verify_duality(corrupted, transpose_spec(corrupted))
    assert not report.ok
    assert not report.identities["M_Y = PO_Xbar"]


def test_multivariate_series_6_1(spec_6_1):
    w = derive_weights(spec_6_1)
    ratio = poincare_structure(w, charges(spec_6_1, w))
    table = series_expand(ratio, 2)
    # the ratio reduces to (1-t1^3)(1-t2^3) / ((1-t1)^3 (1-t2)^3): the
    # grading-one relation cancels one of the four block-one variables
    assert table[(1, 0)] == 3
    assert table[(0, 1)] == 3
    assert table[(0, 0)] == 1


def test_cyclotomic_json_roundtrip(spec_6_2):
    w = derive_weights(spec_6_2)
    ratio = poincare_structure(w, charges(spec_6_2, w))
    assert CyclotomicRatio.from_json(ratio.to_json()) == ratio
