import math

import pytest

from ccgrowth.errors import CoverageError, ParameterError
from ccgrowth.lipschitz import lip_lower, lip_upper
from ccgrowth.rips import COMPLETE, PAPER, OuterAuto, RipsScheme, rips_presentation
from ccgrowth.rng import SplitMix64
from ccgrowth.words import commutator, concat, free_reduce

A, B = 1, 2


def test_identity_brackets_are_exactly_zero(rips16, ctx16):
    ident = OuterAuto(rips16, ())
    assert lip_upper(ident) == 0.0
    est = lip_lower(ident, 2, ctx16)
    assert est.lower == 0.0 and est.certified


def test_upper_is_sum_of_per_letter_maxima(rips16):
    phi = OuterAuto(rips16, (A,))
    want = math.log(max(len(rips16.rules[(A, rips16.x)]), len(rips16.rules[(A, rips16.y)])))
    assert lip_upper(phi) == pytest.approx(want)


def test_upper_subadditive_with_equality_for_reduced_concatenation(rips16):
    qa, qb = (A, B), (B, -A)
    phi_ab = OuterAuto(rips16, concat(qa, qb))
    total = lip_upper(OuterAuto(rips16, qa)) + lip_upper(OuterAuto(rips16, qb))
    assert lip_upper(phi_ab) <= total + 1e-12
    if free_reduce(qa + qb) == qa + qb:
        assert lip_upper(phi_ab) == pytest.approx(total)
    # cancellation makes it strictly smaller
    phi_cancel = OuterAuto(rips16, concat((A, B), (-B, A)))
    assert lip_upper(phi_cancel) < lip_upper(OuterAuto(rips16, (A, B))) + lip_upper(
        OuterAuto(rips16, (B, A))
    )


def test_linear_envelope_for_commutator_powers(rips16):
    kappa_max = math.log(rips16.max_rule_length())
    for m in range(1, 6):
        q = free_reduce(commutator((A,), (B,)) * m)
        assert lip_upper(OuterAuto(rips16, q)) <= kappa_max * len(q) + 1e-9


def test_paper_mode_upper_raises_coverage(heis_q):
    g = rips_presentation(heis_q, RipsScheme(16, PAPER))
    with pytest.raises(CoverageError):
        lip_upper(OuterAuto(g, (A,)))


def test_radius_zero_rejected(rips16, ctx16):
    with pytest.raises(ParameterError):
        lip_lower(OuterAuto(rips16, (A,)), 0, ctx16)


def test_single_letter_lower_is_the_rule_ratio(rips16, ctx16):
    """chi(a) at radius 1: the best class is y, whose image materializes to the
    a,y rule with no cancellation; the denominator (norm of y) is 1."""
    est = lip_lower(OuterAuto(rips16, (A,)), 1, ctx16)
    assert est.lower == pytest.approx(math.log(len(rips16.rules[(A, rips16.y)])))
    assert est.class_witness == (rips16.y,)
    assert not est.certified  # numerator is a materialized upper, not oracle-exact
    assert est.lower <= est.upper + 1e-12


def test_lower_never_exceeds_upper_on_seeded_words(rips16, ctx16):
    rng = SplitMix64(61).split("lip-seeded")
    for _ in range(8):
        q = []
        for _ in range(1 + rng.randrange(6)):
            cands = [z for z in (A, B, -A, -B) if not (q and q[-1] == -z)]
            q.append(cands[rng.randrange(len(cands))])
        phi = OuterAuto(rips16, tuple(q))
        est = lip_lower(phi, 2, ctx16)
        assert est.lower <= est.upper + 1e-12
        assert est.radius == 2 and len(est.class_witness) <= 2
