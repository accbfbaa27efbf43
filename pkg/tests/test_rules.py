from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import (
    attest,
    divisor,
    elliptic,
    jacobian,
    knowledge,
    ppav3_instance,
    ppav4_instance,
    product_surface,
    sub,
    jacobian_times_elliptic,
)
from seshadri import AVSpec, CurveCert, ProductDecomposition, StructureTags, evaluate
from seshadri.radicals import Radical, root_of
from seshadri.rules import (
    Knowledge,
    Refinement,
    RuleApplication,
    default_rules,
    descent_thresholds,
    dichotomy_bound,
    rule_containment,
    rule_curve_certificates,
    rule_divisor_reduction_conditional,
    rule_divisor_reduction_sharp,
    rule_divisor_reduction_unconditional,
    rule_lower_one,
    rule_nef_threshold,
    rule_ppav_divisor,
    rule_product,
    rule_subvariety_descent,
    rule_surface_bauer,
    rule_surface_pin,
    rule_threefold_classifier,
    rule_threefold_dichotomy,
    rule_threefold_two_divisors,
    rule_upper_root,
    sharp_parameter,
)


def pinned(ref):
    assert ref is not None and ref.inconsistency is None
    return ref.pinned


# ------------------------------------------------------------ base bounds


def test_lower_one_on_fresh_instance():
    spec = AVSpec("A", 3, 30)
    ref = rule_lower_one(spec, Knowledge.initial(spec))
    assert ref.lo == Radical(1)
    assert ref.application.citation.startswith("th:nakamaye")


def test_lower_one_keeps_larger_bound():
    spec = AVSpec("A", 3, 30)
    assert rule_lower_one(spec, knowledge(Fraction(4, 3), spec=spec)) is None


def test_lower_one_elliptic_base_case():
    spec = elliptic("E", 5)
    assert pinned(rule_lower_one(spec, Knowledge.initial(spec))) == 5


@pytest.mark.parametrize(
    "dim,degree,expected",
    [(2, 2, Radical(1, 2, 2)), (3, 6, Radical(1, 6, 3)), (1, 5, Radical(5))],
)
def test_upper_root(dim, degree, expected):
    spec = AVSpec("A", dim, degree)
    ref = rule_upper_root(spec, knowledge(1, 100))
    assert ref.hi == expected


def test_curve_certificate_upper_bound():
    spec = AVSpec("A", 3, 30, curves=[CurveCert(4, 3)])
    assert rule_curve_certificates(spec, knowledge(spec=spec)).hi == Radical(Fraction(4, 3))


def test_curve_of_degree_one_pins_one():
    spec = AVSpec("A", 3, 30, curves=[CurveCert(1, 1)])
    k = Knowledge.initial(spec).merge(rule_lower_one(spec, Knowledge.initial(spec)))
    k = k.merge(rule_curve_certificates(spec, k))
    assert k.pinned == 1


def test_no_curves_no_refinement():
    spec = AVSpec("A", 3, 30)
    assert rule_curve_certificates(spec, knowledge(spec=spec)) is None


# ---------------------------------------------------------------- product


def test_product_jacobian_k10():
    spec = jacobian_times_elliptic(10)
    assert pinned(rule_product(spec, knowledge(spec=spec))) == Fraction(4, 3)


def test_product_jacobian_k1():
    spec = jacobian_times_elliptic(1)
    assert pinned(rule_product(spec, knowledge(spec=spec))) == 1


def test_product_factor_with_bounds_and_k1():
    b = AVSpec("B", 2, 4, curves=[CurveCert(3, 2)])
    rb = evaluate(b)
    assert (rb.lo, rb.hi) == (Radical(1), Radical(Fraction(3, 2)))
    spec = AVSpec("A", 3, 12, [divisor(b)], tags=StructureTags(product=ProductDecomposition("B", 1)))
    assert pinned(rule_product(spec, knowledge(spec=spec))) == 1


# ---------------------------------------------------------- nef threshold


@pytest.mark.parametrize("args,sigma", [((30, 3, 2), 5), ((4, 2, 2), 1), ((72, 4, 6), 3)])
def test_nef_threshold_examples(args, sigma):
    assert rule_nef_threshold(*args) == sigma


def test_nef_threshold_rejects_zero_degree():
    with pytest.raises(ValueError):
        rule_nef_threshold(30, 3, 0)


@given(st.integers(2, 6), st.integers(1, 10**4), st.integers(1, 10**4))
def test_nef_threshold_identity(n, parent, div):
    assert rule_nef_threshold(parent, n, div) * n * div == parent


# ------------------------------------------------------------- reductions


def test_unconditional_reduction_ppav3():
    spec = ppav3_instance(18)
    ref = rule_divisor_reduction_unconditional(spec, knowledge(spec=spec))
    assert pinned(ref) == Fraction(4, 3)
    assert any("18² = 324 > 6³ = 216" in p for p in ref.application.premises)


def test_unconditional_reduction_ppav4():
    spec = ppav4_instance(Fraction(12, 7))
    ref = rule_divisor_reduction_unconditional(spec, knowledge(spec=spec))
    assert pinned(ref) == Fraction(12, 7)
    assert any("373248" in p and "331776" in p for p in ref.application.premises)


def test_unconditional_reduction_fails_for_small_degree():
    spec = AVSpec("A", 3, 6, [divisor(jacobian())])
    assert rule_divisor_reduction_unconditional(spec, knowledge(spec=spec)) is None


def test_conditional_reduction_fires_with_certificate():
    spec = AVSpec("A", 3, 30, [divisor(jacobian())], curves=[CurveCert(4, 3)])
    ref = rule_divisor_reduction_conditional(spec, knowledge(1, Fraction(4, 3)), 3)
    assert pinned(ref) == Fraction(4, 3)


def test_conditional_reduction_needs_strict_upper_bound():
    spec = AVSpec("A", 3, 30, [divisor(jacobian())])
    assert rule_divisor_reduction_conditional(spec, knowledge(1, root_of(30, 3)), 3) is None


def test_conditional_reduction_rejects_bad_parameter():
    spec = AVSpec("A", 3, 30, [divisor(jacobian())])
    with pytest.raises(ValueError):
        rule_divisor_reduction_conditional(spec, knowledge(spec=spec), 0)


def test_sharp_parameter_recovers_corollary():
    # with hi = (L^n)^(1/n) the sharp a sits just above n
    spec = ppav3_instance(18)
    a = sharp_parameter(spec, spec.root_degree)
    assert 3 < a <= 3 + Fraction(1, 10**6)
    assert pinned(rule_divisor_reduction_sharp(spec, knowledge(spec=spec))) == Fraction(4, 3)


@given(st.integers(1, 400), st.integers(1, 60))
def test_sharp_matches_corollary_when_strict(m, d):
    spec = AVSpec("A", 3, 6 * m, [divisor(AVSpec("S", 2, 2 * d))])
    k = knowledge(spec=spec)
    plain = rule_divisor_reduction_unconditional(spec, k)
    sharp = rule_divisor_reduction_sharp(spec, k)
    if sharp is None:
        assert plain is None
    if plain is not None and sharp is not None:
        assert (plain.lo, plain.hi) == (sharp.lo, sharp.hi)


# ------------------------------------------------------------ containment


def test_surface_containment_in_elliptic_divisor():
    spec = AVSpec("S", 2, 20, [divisor(elliptic("E", 2))], curves=[CurveCert(2, 1, generates_dim=1)])
    ref = rule_containment(spec, knowledge(spec=spec), 2)
    assert ref.inconsistency is None
    assert ref.facts == ("curve #0 (ε_C = 2) ⊂ E",)


def test_second_submaximal_curve_cannot_fit_in_elliptic_divisor():
    spec = AVSpec("S", 2, 20, [divisor(elliptic("E", 2))], curves=[CurveCert(2, 1, 1), CurveCert(3, 1)])
    assert rule_containment(spec, knowledge(spec=spec), 2).inconsistency


def test_curve_above_threshold_not_contained():
    spec = AVSpec("S", 2, 20, [divisor(elliptic("E", 2))], curves=[CurveCert(5, 1)])
    assert rule_containment(spec, knowledge(spec=spec), 2) is None


def test_generating_curve_forced_into_divisor_is_inconsistent():
    spec = AVSpec("A", 3, 48, [divisor(AVSpec("S", 2, 2))], curves=[CurveCert(2, 1, generates_dim=3)])
    ref = rule_containment(spec, knowledge(spec=spec), 3)
    assert "generates A" in ref.inconsistency


def test_containment_strict_and_non_strict_boundaries():
    # L^2 = 16, divisor degree 2, a = 2: (L^2)^(1/2) = 4 equals a * 2 exactly
    spec = AVSpec("S", 2, 16, [divisor(elliptic("E", 2))], curves=[CurveCert(4, 1)])
    assert rule_containment(spec, knowledge(spec=spec), 2, strict=True) is None
    # the non-strict root gate holds, but then the curve bound is strict and ε_C = 4 is not < 4
    assert rule_containment(spec, knowledge(spec=spec), 2, strict=False) is None
    spec2 = AVSpec("S", 2, 16, [divisor(elliptic("E", 2))], curves=[CurveCert(3, 1)])
    assert rule_containment(spec2, knowledge(spec=spec2), 2, strict=True) is None
    assert rule_containment(spec2, knowledge(spec=spec2), 2, strict=False).inconsistency


# ---------------------------------------------------------------- descent


def descent_world(attest_dims=(1, 2)):
    degree = 600
    probe = AVSpec("A", 3, degree)
    atts = [attest(i, r) for i, r in descent_thresholds(probe) if i in attest_dims]
    return AVSpec("A", 3, degree, [divisor(jacobian()), sub(elliptic("E", 2))], attestations=atts)


def test_descent_takes_the_minimum():
    spec = descent_world()
    ref = rule_subvariety_descent(spec, knowledge(1, Fraction(4, 3)))
    assert pinned(ref) == Fraction(4, 3)


def test_descent_needs_hypothesis():
    spec = descent_world()
    assert rule_subvariety_descent(spec, knowledge(1, spec.nakamaye_threshold)) is None


def test_descent_blocked_without_attestation():
    spec = descent_world(attest_dims=(1,))
    ref = rule_subvariety_descent(spec, knowledge(1, Fraction(4, 3)))
    assert ref.lo is None and ref.hi is None
    (note,) = ref.blocked
    assert note.startswith("descent blocked: catalog incomplete for dimension 2")


def test_descent_thresholds_values():
    spec = AVSpec("A", 3, 216)
    assert descent_thresholds(spec) == [(1, Radical(2)), (2, Radical(16))]


# --------------------------------------------------------------- surfaces


def test_surface_pin():
    spec = AVSpec("S", 2, 20, [divisor(elliptic("E", 2))])
    assert pinned(rule_surface_pin(spec, knowledge(spec=spec))) == 2


def test_surface_pin_boundary():
    spec = AVSpec("S", 2, 4, curves=[CurveCert(1, 1, generates_dim=1)])
    assert rule_surface_pin(spec, knowledge(spec=spec)) is None
    assert evaluate(spec).value == 1


def test_surface_pin_uniqueness():
    spec = AVSpec("S", 2, 40, [divisor(elliptic("E1", 1)), divisor(elliptic("E2", 2))])
    assert "all lie below" in rule_surface_pin(spec, knowledge(spec=spec)).inconsistency


def test_bauer_elliptic_smaller():
    spec = AVSpec("S", 2, 2, [divisor(elliptic("E", 1))], attestations=[attest(1, 2)])
    assert rule_surface_bauer(spec, Knowledge.initial(spec)).lo == Radical(1)


def test_bauer_attested_large_elliptic_degree():
    spec = AVSpec("S", 2, 2, attestations=[attest(1, 2)])
    ref = rule_surface_bauer(spec, knowledge(spec=spec))
    assert ref.lo == Radical(Fraction(1, 2), 7, 2)


def test_bauer_unattested_is_diagnostic_only():
    spec = AVSpec("S", 2, 2)
    ref = rule_surface_bauer(spec, knowledge(spec=spec))
    assert ref.lo is None and ref.notes and "not attested" in ref.notes[0]


# ------------------------------------------------------------- threefolds


def test_dichotomy_reduces_through_small_surface():
    spec = AVSpec("A", 3, 174, [divisor(jacobian())])
    ref = rule_threefold_dichotomy(spec, knowledge(1, Fraction(4, 3)))
    assert pinned(ref) == Fraction(4, 3)


def test_dichotomy_skips_degree_four_surface():
    spec = AVSpec("A", 3, 174, [divisor(AVSpec("S", 2, 4))])
    ref = rule_threefold_dichotomy(spec, knowledge(1, Fraction(4, 3)))
    assert ref.lo is None and ref.hi is None and "dimension 2" in ref.blocked[0]


def test_dichotomy_elliptic_branch_pins_e0():
    probe = AVSpec("A", 3, 174)
    spec = AVSpec(
        "A",
        3,
        174,
        [sub(elliptic("E", 1))],
        attestations=[attest(2, dichotomy_bound(probe)), attest(1, 2)],
    )
    ref = rule_threefold_dichotomy(spec, knowledge(1, 1))
    assert pinned(ref) == 1
    assert "ε(A,L) is the degree of an elliptic curve" in ref.facts


def test_classifier_small_degree_pins_one():
    spec = AVSpec("A", 3, 60)
    ref = rule_threefold_classifier(spec, knowledge(1, Fraction(4, 5)))
    assert ref.candidates == {1}


def test_classifier_degree_66():
    spec = AVSpec("A", 3, 66)
    ref = rule_threefold_classifier(spec, knowledge(1, Fraction(4, 3)))
    assert ref.candidates == {1, Fraction(4, 3)}


def test_classifier_above_174_silent():
    spec = AVSpec("A", 3, 180)
    assert rule_threefold_classifier(spec, knowledge(1, 1)) is None


@pytest.mark.parametrize(
    "spec,value",
    [
        (ppav3_instance(18), Fraction(4, 3)),
        (ppav3_instance(18, product_surface()), 1),
        (ppav4_instance(Fraction(12, 7)), Fraction(12, 7)),
    ],
)
def test_ppav_divisor(spec, value):
    assert pinned(rule_ppav_divisor(spec, knowledge(spec=spec))) == value


def test_ppav_divisor_untagged_gives_candidates():
    spec = ppav4_instance()
    ref = rule_ppav_divisor(spec, knowledge(spec=spec))
    assert ref.candidates == {1, Fraction(3, 2), Fraction(12, 7)}


def two_divisor_world(curves):
    return AVSpec("A", 3, 18, [divisor(AVSpec("S1", 2, 2)), divisor(AVSpec("S2", 2, 2))], curves=curves)


def test_two_divisors_pins_elliptic_degree():
    spec = two_divisor_world([CurveCert(1, 1, generates_dim=1)])
    assert pinned(rule_threefold_two_divisors(spec, knowledge(spec=spec), 3)) == 1


def test_two_divisors_two_curves_inconsistent():
    spec = two_divisor_world([CurveCert(1, 1), CurveCert(2, 1)])
    assert "at most one curve" in rule_threefold_two_divisors(spec, knowledge(spec=spec), 3).inconsistency


def test_two_divisors_needs_two():
    spec = AVSpec("A", 3, 18, [divisor(AVSpec("S1", 2, 2))], curves=[CurveCert(1, 1)])
    assert rule_threefold_two_divisors(spec, knowledge(spec=spec), 3) is None


# -------------------------------------------------------------- structure


def test_every_rule_cites():
    for rule in default_rules(3):
        assert rule.name
    for cite in __import__("seshadri.rules", fromlist=["CITE"]).CITE.values():
        assert cite


def test_rule_table_priority():
    names = [r.name for r in default_rules(3)]
    assert names.index("lower_one") < names.index("curves") < names.index("product")
    assert names.index("product") < names.index("reduction") < names.index("reduction_a=n")
    assert names.index("reduction_sharp") < names.index("descent") < names.index("classifier")
    assert all(r.params.get("a") is not None for r in default_rules(3) if "a" in r.params)


fractions = st.fractions(min_value=1, max_value=20)


@given(fractions, fractions, st.one_of(st.none(), fractions), st.one_of(st.none(), fractions))
def test_merge_never_widens(lo, span, new_lo, new_hi):
    k = Knowledge(Radical(lo), Radical(lo + span))
    ref = Refinement(
        RuleApplication("t", "c"),
        lo=None if new_lo is None else Radical(new_lo),
        hi=None if new_hi is None else Radical(new_hi),
    )
    merged = k.merge(ref)
    if merged.consistent:
        assert k.lo <= merged.lo <= merged.hi <= k.hi
    else:
        assert max(k.lo, ref.lo or k.lo) > min(k.hi, ref.hi or k.hi)
