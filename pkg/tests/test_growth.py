import math

import pytest

from ccgrowth.errors import ArityError, ParameterError, TrivialClassError
from ccgrowth.growth import (
    FreeFactor,
    FreeGroupAutomorphism,
    LengthFunctionZ,
    ProductGroup,
    check_length_function,
    dominates,
    equivalent,
    growth_curve,
    loglog_slope,
    product_growth_curve,
    product_norm,
    seeded_automorphism,
    substitute,
)
from ccgrowth.metrics import central_distance
from ccgrowth.rips import OuterAuto
from ccgrowth.rng import SplitMix64
from ccgrowth.words import Alphabet, commutator, free_reduce, invert

A, B = 1, 2


# -- growth curves ---------------------------------------------------------------


def test_identity_automorphism_curve_is_flat(rips10, oracle40):
    phi = OuterAuto(rips10, ())
    cls = (rips10.x, rips10.y)
    curve = growth_curve(phi, cls, range(0, 8), oracle40)
    for s in curve.samples:
        assert s.q_length == 0 and s.upper == 2
        assert s.ln_upper == pytest.approx(math.log(2))


def test_curve_zero_row(rips10, oracle40):
    phi = OuterAuto(rips10, commutator((A,), (B,)))
    curve = growth_curve(phi, (rips10.x,), range(0, 3), oracle40)
    s0 = curve.sample_at(0)
    assert s0.q_length == 0 and s0.upper == 1 and s0.ln_upper == 0.0


def test_demo_curve_counts_bound_and_distortion(rips10, oracle40):
    """Counts-mode curve for chi([a,b]) on the class of x at k=10: q-lengths
    are the distorted central distances and ln uppers stay below
    q_length * ln(longest rule)."""
    phi = OuterAuto(rips10, commutator((A,), (B,)))
    curve = growth_curve(phi, (rips10.x,), range(1, 101), oracle40)
    log_max_rule = math.log(rips10.max_rule_length())
    for s in curve.samples:
        assert s.q_length == central_distance(s.n)
        assert s.ln_upper <= s.q_length * log_max_rule + 1e-9
    q_lengths = [s.q_length for s in curve.samples]
    assert all(u <= v for u, v in zip(q_lengths, q_lengths[1:]))


def test_curve_rejects_trivial_class(rips10, oracle40):
    with pytest.raises(TrivialClassError):
        growth_curve(OuterAuto(rips10, (A,)), (), range(3), oracle40)


def test_curve_norm_oracle_column(rips16, ctx16, oracle40):
    """With an oracle config the curve certifies small samples; certified
    values sit under the bracket."""
    phi = OuterAuto(rips16, (A,))
    cfg = {
        "ctx": ctx16,
        "radius": 2,
        "conj_radius": 1,
        "conjugator_letters": [1, 2, 3, 4, -1, -2, -3, -4],
    }
    curve = growth_curve(phi, (rips16.x,), range(0, 2), oracle40, norm_oracle=cfg)
    s0, s1 = curve.samples
    assert s0.oracle_exact == 1  # the class of x itself
    assert s1.oracle_exact == 1  # rule(a, x) is G-conjugate to x
    for s in curve.samples:
        assert s.oracle_exact <= s.upper


def test_curve_gap_recording(rips10, oracle40):
    phi = OuterAuto(rips10, (A, B))
    curve = growth_curve(
        phi, (rips10.x,), range(0, 4), oracle40, mode="materialize", on_error="gap"
    )
    kinds = [s.error for s in curve.samples]
    assert kinds[0] is None  # n = 0 materializes trivially
    assert "ResourceBudgetError" in kinds  # big powers do not


# -- domination -------------------------------------------------------------------


def test_sqrt_dominated_by_n():
    rep = dominates(math.sqrt, lambda n: n, range(1, 401))
    assert rep.relation == "dominates" and rep.constant_C == 1


def test_n_not_dominated_by_sqrt_with_small_constant():
    rep = dominates(lambda n: n, math.sqrt, range(1, 401), C_max=3)
    assert rep.relation == "fails"
    n, lhs, rhs = rep.counterexample
    assert n == 400 and lhs == 400 and rhs == pytest.approx(20.0)


def test_dominates_reflexive():
    f = lambda n: 3.7 * n + 1  # noqa: E731
    rep = dominates(f, f, range(1, 50))
    assert rep.constant_C == 1


def test_dominates_returns_smallest_constant():
    rng = SplitMix64(51).split("growth-smallest-c")
    for _ in range(20):
        a = 1 + rng.randrange(9)
        rep = dominates(lambda n, a=a: a * n, lambda n: n, range(1, 30))
        C = rep.constant_C
        assert all(a * n <= C * n + C for n in range(1, 30))
        assert any(a * n > (C - 1) * n + (C - 1) for n in range(1, 30)) or C == 1


def test_dominates_transitive_with_composed_constant():
    f = lambda n: math.sqrt(n)  # noqa: E731
    g = lambda n: n  # noqa: E731
    h = lambda n: n * n  # noqa: E731
    dom_fg = dominates(f, g, range(1, 100))
    dom_gh = dominates(g, h, range(1, 100))
    C1, C2 = dom_fg.constant_C, dom_gh.constant_C
    composed = C1 * C2 + C1 + C2
    assert dominates(f, h, range(1, 100), C_max=composed).relation == "dominates"


def test_empty_domain_rejected():
    with pytest.raises(ParameterError):
        dominates(math.sqrt, math.sqrt, [])


def test_equivalent_sqrt_and_ceil_sqrt():
    rep = equivalent(math.sqrt, lambda n: math.ceil(math.sqrt(n)), range(1, 400))
    assert rep.relation == "equivalent" and rep.constant_C == 1


def test_equivalent_fails_for_linear_vs_sqrt():
    rep = equivalent(lambda n: n, math.sqrt, range(1, 401), C_max=3)
    assert rep.relation == "fails"


def test_equivalent_reflexive_and_symmetric():
    f = lambda n: 2 * n + 3  # noqa: E731
    g = lambda n: 3 * n  # noqa: E731
    assert equivalent(f, f, range(1, 60)).constant_C == 1
    r1 = equivalent(f, g, range(1, 60))
    r2 = equivalent(g, f, range(1, 60))
    assert r1.relation == r2.relation == "equivalent"
    assert r1.constant_C == r2.constant_C


def test_loglog_slope_of_powers():
    assert loglog_slope([(n, n**0.5) for n in range(10, 200)]) == pytest.approx(0.5)
    assert loglog_slope([(n, 7 * n) for n in range(10, 200)]) == pytest.approx(1.0)


# -- length functions ----------------------------------------------------------


def test_power_half_passes_at_lambda_four():
    rep = check_length_function(LengthFunctionZ.power("1/2"), 30, 4)
    assert rep["verdict"]
    # exhaustive count: |{|n| <= r^2}| = 2r^2 + 1
    for row in rep["axiom4"]["rows"]:
        assert row["count"] == 2 * row["r"] ** 2 + 1


def test_word_metric_on_z_passes_at_lambda_three():
    rep = check_length_function(LengthFunctionZ.power(1), 30, 3)
    assert rep["verdict"]


def test_zero_function_fails_axiom_one_with_witness_one():
    rep = check_length_function(LengthFunctionZ(lambda n: 0, kind="zero"), 5, 4)
    assert not rep["verdict"]
    assert not rep["axiom1"]["passed"] and rep["axiom1"]["witness"] == 1


def test_power_third_fails_at_lambda_four_exactly_at_r_two():
    """ceil(|n|^(1/3)) <= 2 holds for |n| <= 8: 17 integers > 4^2."""
    rep = check_length_function(LengthFunctionZ.power("1/3"), 30, 4)
    assert not rep["verdict"]
    bad = [row for row in rep["axiom4"]["rows"] if not row["ok"]]
    assert [row["r"] for row in bad] == [2]
    assert bad[0]["count"] == 17


def test_power_third_passes_at_lambda_five():
    assert check_length_function(LengthFunctionZ.power("1/3"), 30, 5)["verdict"]


@pytest.mark.parametrize("alpha", ["1/2", "2/3", "1"])
def test_power_kinds_pass_at_lambda_four(alpha):
    rep = check_length_function(LengthFunctionZ.power(alpha), 30, 4)
    assert rep["verdict"] and rep["axiom4"]["exact"]


def test_exact_counts_match_bruteforce_scan():
    for lf in (LengthFunctionZ.power("1/2"), LengthFunctionZ.power("2/3"),
               LengthFunctionZ.logarithmic()):
        for r in range(1, 7):
            brute = sum(1 for n in range(-3000, 3001) if lf(n) <= r)
            assert lf.count_at_most(r) == brute


def test_logarithmic_kind_passes():
    assert check_length_function(LengthFunctionZ.logarithmic(), 20, 4)["verdict"]


# -- products ---------------------------------------------------------------------


def two_free_factors(seed=7, moves=3):
    factors = []
    rng = SplitMix64(seed)
    for i in (1, 2):
        alpha = Alphabet([f"x{i}", f"y{i}"])
        auto = seeded_automorphism(alpha, rng.split(f"factor-{i}"), n_moves=moves)
        factors.append(FreeFactor(alpha, auto))
    return ProductGroup(factors)


def test_product_norm_examples():
    product = two_free_factors()
    assert product_norm(product, ((), ())) == 0
    assert product_norm(product, ((1, 2), (1,))) == 3  # |x1 y1| + |x2|


def test_product_norm_arity_checked():
    with pytest.raises(ArityError):
        product_norm(two_free_factors(), ((1,),))


def test_product_alphabets_must_be_disjoint():
    alpha = Alphabet(["x", "y"])
    with pytest.raises(ParameterError):
        ProductGroup([FreeFactor(alpha), FreeFactor(alpha)])


def test_automorphism_powers_and_inverses():
    alpha = Alphabet(["x", "y"])
    rng = SplitMix64(8).split("growth-auto")
    phi = seeded_automorphism(alpha, rng, n_moves=4)
    w = (1, 2, -1)
    # phi^-1 after phi is the identity
    assert substitute(phi.apply(w), phi.inverse_images) == free_reduce(w)
    # memoized powers equal repeated application
    out = free_reduce(w)
    for n in range(1, 8):
        out = phi.apply(out)
        assert phi.apply_power(w, n) == out


def test_product_additivity_exact_on_random_tuples():
    """||phi^n(g)|| = sum over factors, exactly, for seeded tuples and n <= 10."""
    product = two_free_factors(seed=99)
    rng = SplitMix64(100).split("growth-additivity")
    letters = [1, 2, -1, -2]
    for _ in range(100):
        g = []
        for _f in product.factors:
            w = []
            for _ in range(rng.randrange(5)):
                cands = [z for z in letters if not (w and w[-1] == -z)]
                w.append(cands[rng.randrange(len(cands))])
            g.append(tuple(w))
        g = tuple(g)
        for n in range(0, 11):
            image = product.apply_power(g, n)
            lhs = product_norm(product, image)
            rhs = sum(f.norm(w) for f, w in zip(product.factors, image))
            assert lhs - rhs == 0


def test_singleton_support_curve_equals_factor_curve():
    product = two_free_factors(seed=5)
    g = ((1, 2), ())
    curve = product_growth_curve(product, g, range(0, 11))
    assert curve.meta["support"] == [0]
    factor = product.factors[0]
    for s in curve.samples:
        assert s.oracle_exact == factor.norm(factor.apply_power((1, 2), s.n))


def test_trivial_tuple_rejected():
    with pytest.raises(TrivialClassError):
        product_growth_curve(two_free_factors(), ((), ()), range(5))


def test_sum_of_two_distorted_uppers_is_sqrt_shaped(heis_q, oracle40):
    """Two distorted-commutator demo factors with distinct k: the log of the
    summed norm brackets stays equivalent to sqrt(n)."""
    from ccgrowth.presentations import parse_presentation  # noqa: F401 (fixture Q reused)
    from ccgrowth.rips import RipsScheme, rips_presentation, COMPLETE

    uppers = []
    for k in (10, 12):
        g = rips_presentation(heis_q, RipsScheme(k, COMPLETE))
        phi = OuterAuto(g, commutator((A,), (B,)))
        curve = growth_curve(phi, (g.x,), range(1, 201), oracle40)
        uppers.append({s.n: s.upper for s in curve.samples})
    combined = {n: math.log(uppers[0][n] + uppers[1][n]) for n in uppers[0]}
    rep = equivalent(lambda n: combined[n], math.sqrt, range(1, 201), C_max=128)
    assert rep.relation == "equivalent"
