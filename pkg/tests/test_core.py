import math
from dataclasses import FrozenInstanceError
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import convlab as cl
from convlab.core import (
    SUSPEND,
    Branch,
    Measure,
    World,
    as_fraction,
    binary_sequence,
    identification_loss,
)


def test_suspend_is_a_singleton_without_payload():
    assert cl.SUSPEND is type(cl.SUSPEND)()
    assert repr(cl.SUSPEND) == "Suspend"


def test_binary_sequence_accepts_strings_and_iterables():
    assert binary_sequence("1101") == (1, 1, 0, 1)
    assert binary_sequence([1, 0]) == (1, 0)
    assert binary_sequence("") == ()
    with pytest.raises(cl.InputDomainError):
        binary_sequence("1021")
    with pytest.raises(cl.InputDomainError):
        binary_sequence([1, 2])


def test_as_fraction_reads_floats_as_their_decimal():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(0.45) == Fraction(9, 20)
    assert as_fraction(Fraction(1, 3)) == Fraction(1, 3)
    assert as_fraction(2) == Fraction(2)
    with pytest.raises(cl.InputDomainError):
        as_fraction(math.inf)


def test_branch_constructors_and_prefixes():
    assert cl.single_zero_branch(3).prefix(5) == (1, 1, 0, 1, 1)
    assert cl.constant_branch(1).prefix(4) == (1, 1, 1, 1)
    assert cl.alternating_branch().prefix(6) == (1, 0, 1, 0, 1, 0)
    assert cl.single_zero_branch(3).first_zero == 3
    assert cl.constant_branch(1).zero_free


def test_worlds_are_immutable():
    w = World("w", cl.constant_branch(1), cl.YES)
    with pytest.raises(FrozenInstanceError):
        w.truth = cl.NO


def test_bernoulli_measure_prefix_probabilities_are_exact():
    m = Measure.iid_bernoulli(Fraction(1, 2))
    assert m.prefix_prob((1, 1)) == Fraction(1, 4)
    assert m.prefix_prob(()) == 1
    m3 = Measure.iid_bernoulli("0.3")
    assert m3.prefix_prob((1, 0)) == Fraction(3, 10) * Fraction(7, 10)


@pytest.mark.parametrize(
    "measure",
    [
        Measure.iid_bernoulli(Fraction(9, 20)),
        Measure.iid_bernoulli(Fraction(1)),
        Measure.iid_examples({("a", 1): Fraction(1, 3), ("b", 0): Fraction(2, 3)}),
    ],
)
def test_children_probabilities_sum_to_the_node(measure):
    # countable additivity on the tree, checked exactly on small nodes
    tokens = [tok for tok, _ in measure.token_probs]
    nodes = [(), (tokens[0],), (tokens[-1], tokens[0])]
    for node in nodes:
        children = sum(measure.prefix_prob(node + (t,)) for t in tokens)
        assert children == measure.prefix_prob(node)


def test_point_mass_prefix_probability_is_an_indicator():
    b = cl.constant_branch(1, "all-ones")
    m = Measure.point_mass(b)
    assert m.prefix_prob((1, 1, 1)) == 1
    assert m.prefix_prob((1, 0)) == 0


def test_sampler_frequencies_match_prefix_probabilities():
    from convlab import seeding

    m = Measure.iid_bernoulli(Fraction(3, 10))
    rng = seeding.generator(123, "freq-check")
    trials = 20_000
    hits = sum(m.sample_prefix(rng, 1)[0] for _ in range(trials))
    p_hat = hits / trials
    se = math.sqrt(0.3 * 0.7 / trials)
    assert abs(p_hat - 0.3) < 4 * se


def test_sampled_branch_is_frozen_and_index_stable():
    m = Measure.iid_bernoulli(Fraction(1, 2))
    b1 = m.sample_branch(99, "x", branch_id="s1")
    b2 = m.sample_branch(99, "x", branch_id="s2")
    assert b1.prefix(64) == b2.prefix(64)
    assert b1.token_at(17) == b1.token_at(17)
    # out-of-order access agrees with sequential access
    b3 = m.sample_branch(99, "x", branch_id="s3")
    late = b3.token_at(40)
    assert b3.prefix(40)[-1] == late


def test_apply_method_is_deterministic_and_validates_tokens():
    assert cl.apply_method(cl.raven_rule, "111") == cl.apply_method(cl.raven_rule, "111") == cl.YES
    assert cl.apply_method(cl.raven_rule, "") == cl.YES
    assert cl.apply_method(cl.frequency_estimator, "1101") == Fraction(3, 4)
    with pytest.raises(cl.InputDomainError):
        cl.apply_method(cl.raven_rule, "12")


def test_output_at_tracks_the_branch_prefix():
    er = cl.easy_raven()
    assert cl.output_at(cl.raven_rule, er.world("all-ones"), 5) == cl.YES
    w3 = er.world("first-zero-at-3")
    assert cl.output_at(cl.raven_rule, w3, 2) == cl.YES
    assert cl.output_at(cl.raven_rule, w3, 3) == cl.NO


def test_output_at_depends_only_on_the_prefix():
    shared = (1, 1, 0)
    w1 = World("w1", Branch("b1", lambda i: shared[i - 1] if i <= 3 else 1), cl.NO)
    w2 = World("w2", Branch("b2", lambda i: shared[i - 1] if i <= 3 else 0), cl.NO)
    for n in range(4):
        assert cl.output_at(cl.raven_rule, w1, n) == cl.output_at(cl.raven_rule, w2, n)
    with pytest.raises(cl.InputDomainError):
        cl.output_at(cl.raven_rule, w1, -1)


def test_loss_of_spec_values():
    er = cl.easy_raven()
    all_ones = er.world("all-ones")
    assert cl.loss_of(er, cl.YES, all_ones) == 0
    assert cl.loss_of(er, cl.NO, all_ones) == 1
    assert cl.loss_of(er, SUSPEND, all_ones) == math.inf

    cb = cl.coin_bias()
    w = cb.world("theta=0.5")
    assert cl.loss_of(cb, Fraction(7, 10), w) == Fraction(1, 5)
    assert cl.loss_of(cb, SUSPEND, w) == math.inf
    with pytest.raises(cl.InputDomainError):
        cl.loss_of(cb, 1.5, w)  # outside the unit interval
    with pytest.raises(cl.InputDomainError):
        cl.loss_of(er, "Maybe", all_ones)


def test_loss_nonnegative_and_zero_exactly_at_truth_on_catalog_problems():
    for problem in (cl.easy_raven(5), cl.fair_coin(), cl.coin_bias()):
        for w in problem.worlds:
            assert problem.loss.eval(w.truth, w) == 0
            for h in problem.probe_hypotheses:
                loss = problem.loss.eval(h, w)
                assert loss >= 0
                if h != w.truth:
                    assert loss > 0


def test_validate_problem_passes_on_catalog_and_flags_constructed_violations():
    report = cl.validate_problem(cl.easy_raven())
    assert report.all_ok

    # a loss that grants zero to both hypotheses in some world
    degenerate = cl.EmpiricalProblem(
        name="degenerate",
        hypothesis_space=cl.FiniteHypothesisSpace((cl.YES, cl.NO)),
        alphabet=(0, 1),
        worlds=(World("w", cl.constant_branch(1), cl.YES),),
        loss=cl.LossFunction("zero", lambda h, w: 0),
        probe_hypotheses=(cl.YES, cl.NO),
    )
    rep = cl.validate_problem(degenerate)
    assert not rep.all_ok
    assert rep.checks[0].rival_zero_loss == cl.NO

    # a world emitting a token outside the binary alphabet
    alien = cl.EmpiricalProblem(
        name="alien",
        hypothesis_space=cl.FiniteHypothesisSpace((cl.YES, cl.NO)),
        alphabet=(0, 1),
        worlds=(World("w", cl.constant_branch(2, "twos"), cl.YES),),
        loss=identification_loss(),
        probe_hypotheses=(cl.YES, cl.NO),
    )
    rep = cl.validate_problem(alien)
    assert not rep.all_ok
    assert not rep.checks[0].alphabet_ok


@given(st.lists(st.integers(min_value=0, max_value=1), max_size=30))
def test_method_determinism_property(bits):
    seq = tuple(bits)
    for method in (cl.raven_rule, cl.fair_coin_test, cl.frequency_estimator):
        assert method(seq) == method(seq)
