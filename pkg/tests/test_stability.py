"""The refinement-stability engine: one-step checks, hypotheses, closures."""

import json
from fractions import Fraction

import pytest

from ifsarith.ifs import Params, WordSet, basic_interval, wordset_union
from ifsarith.intervals import BinaryOp, Interval, IntervalUnion, op_on_unions
from ifsarith.stability import (
    StabilityRefusal,
    UnequalLengths,
    one_step_stable,
    stability_hypotheses,
    stable_closure,
)

F = Fraction

P = Params(F(2, 5), F(9, 20))
P_BAD = Params(F(1, 5), F(1, 4))
UNIT = Interval(F(0), F(1))


def test_one_step_add_holds():
    step = one_step_stable(BinaryOp.ADD, UNIT, UNIT, P)
    assert step.stable
    # the two adjacency differences: 2c-(1-lam) = 3/10, (1+c)-2(1-lam) = 1/4
    diffs = [(e.lhs - e.rhs) for e in step.trace]
    assert diffs == [F(3, 10), F(1, 4)]
    assert all(e.ok for e in step.trace)


def test_one_step_add_fails_outside_region():
    step = one_step_stable(BinaryOp.ADD, UNIT, UNIT, P_BAD)
    assert not step.stable
    # 2c+lam-1 = -3/10 shows up as a violated overlap
    assert any(e.lhs - e.rhs == F(-3, 10) and not e.ok for e in step.trace)


def test_one_step_div_holds():
    top = Interval(F(3, 5), F(1))
    assert one_step_stable(BinaryOp.DIV, top, top, P).stable


def test_one_step_requires_equal_lengths():
    with pytest.raises(UnequalLengths):
        one_step_stable(BinaryOp.ADD, UNIT, Interval(F(0), F(1, 2)), P)


def test_hypotheses_sqrt_sum():
    top = Interval(F(3, 5), F(1))
    hyp = stability_hypotheses(BinaryOp.SQRT_SUM, top, top, P)
    assert hyp.ok
    by_name = {e.name: e for e in hyp.trace}
    # a = 3/5 >= (1-c-lam)^2 = 9/400
    assert by_name["left_endpoint_floor"].lhs == F(3, 5)
    assert by_name["left_endpoint_floor"].rhs == F(9, 400)
    # 8a(2lam+c-1) = 8*(3/5)*(1/4) = 6/5 against t*(-169/400) = -169/1000
    assert by_name["length_budget"].lhs == F(6, 5)
    assert by_name["length_budget"].rhs == F(-169, 1000)


def test_hypotheses_div():
    top = Interval(F(3, 5), F(1))
    hyp = stability_hypotheses(BinaryOp.DIV, top, top, P)
    assert hyp.ok
    by_name = {e.name: e for e in hyp.trace}
    assert by_name["left_endpoint_floor"].rhs == F(3, 20)  # 1-c-lam
    assert by_name["product_region"].rhs == F(9, 25)  # (1-lam)^2


def test_hypotheses_add_fail():
    hyp = stability_hypotheses(BinaryOp.ADD, UNIT, UNIT, P_BAD)
    assert not hyp.ok  # c = 1/4 < (1-lam)^2 = 16/25


def test_hypotheses_no_closed_form_for_sub_mul():
    for op in (BinaryOp.SUB, BinaryOp.MUL):
        hyp = stability_hypotheses(op, UNIT, UNIT, P)
        assert not hyp.has_closed_form


def test_stable_closure_sum():
    ws = WordSet.of((2,), (3,))
    out = stable_closure(BinaryOp.ADD, ws, ws, P)
    assert out.exact
    assert out.image == IntervalUnion([Interval(F(1, 10), F(2))])


def test_stable_closure_div_big():
    p = Params(F(9, 20), F(1, 2))
    ws = WordSet.of((3,))
    out = stable_closure(BinaryOp.DIV, ws, ws, p)
    assert out.image == IntervalUnion([Interval(F(11, 20), F(20, 11))])


def test_stable_closure_refusal_names_pair_and_condition():
    ws = WordSet.of((2,), (3,))
    with pytest.raises(StabilityRefusal) as err:
        stable_closure(BinaryOp.ADD, ws, ws, P_BAD)
    assert err.value.condition == "product_region"
    assert err.value.pair == ((2,), (2,))


def test_stable_closure_rejects_lemma_mode_for_mul():
    ws = WordSet.of((2,), (3,))
    with pytest.raises(StabilityRefusal) as err:
        stable_closure(BinaryOp.MUL, ws, ws, P)
    assert err.value.condition == "no_closed_form"


def test_lemma_mode_implies_one_step_for_every_pair():
    ws = WordSet.of((1, 3), (2, 3), (3, 1), (3, 2), (3, 3))
    stable_closure(BinaryOp.SQRT_SUM, ws, ws, P)  # must not refuse
    for wa in ws.sorted_words():
        for wb in ws.sorted_words():
            step = one_step_stable(
                BinaryOp.SQRT_SUM, basic_interval(P, wa), basic_interval(P, wb), P
            )
            assert step.stable


def _serialized(image: IntervalUnion) -> str:
    return json.dumps(image.to_payload())


@pytest.mark.parametrize(
    "op,words,params",
    [
        (BinaryOp.ADD, WordSet.of((2,), (3,)), P),
        (BinaryOp.DIV, WordSet.of((3,)), Params(F(9, 20), F(1, 2))),
        (BinaryOp.DIV, WordSet.of((2, 3), (3, 1), (3, 2), (3, 3)), Params(F(7, 20), F(1, 2))),
        (BinaryOp.SQRT_SUM, WordSet.of((2,), (3,)), P),
        (BinaryOp.SQRT_SUM, WordSet.of((1, 3), (2, 3), (3, 1), (3, 2), (3, 3)), Params(F(9, 20), F(9, 20))),
    ],
)
def test_certificates_are_fixed_points(op, words, params):
    base = stable_closure(op, words, words, params).image
    for extra in (1, 2):
        refined = words.refined(extra)
        u = wordset_union(params, refined)
        assert _serialized(op_on_unions(op, u, u)) == _serialized(base)


def test_hypotheses_persist_under_refinement():
    # if the closed-form conditions hold for a pair, they hold for every
    # pair of basic children, exhaustively three ranks down (children only
    # move the left endpoint right and shrink the common length)
    cases = [
        (BinaryOp.ADD, P, ((2,), (3,))),
        (BinaryOp.DIV, Params(F(7, 20), F(1, 2)), ((2, 3), (3, 3))),
        (BinaryOp.SQRT_SUM, Params(F(9, 20), F(9, 20)), ((1, 3), (3, 3))),
    ]
    for op, p, (wa0, wb0) in cases:
        pairs = [(wa0, wb0)]
        for _ in range(4):  # ranks 0..3 below the starting pair
            next_pairs = []
            for wa, wb in pairs:
                hyp = stability_hypotheses(
                    op, basic_interval(p, wa), basic_interval(p, wb), p
                )
                assert hyp.ok, (op, wa, wb)
                next_pairs.extend(
                    (wa + (i,), wb + (j,)) for i in (1, 2, 3) for j in (1, 2, 3)
                )
            pairs = next_pairs


def test_exhaustive_mode_tags_depth_and_nests():
    ws = WordSet.of((3,),)
    out1 = stable_closure(BinaryOp.MUL, ws, ws, P, "exhaustive", depth=0)
    assert not out1.exact
    assert out1.verified_depth == 0
    # deeper refined images are subsets of shallower ones
    shallow = op_on_unions(
        BinaryOp.MUL, wordset_union(P, ws), wordset_union(P, ws)
    )
    for extra in (1, 2):
        u = wordset_union(P, ws.refined(extra))
        deeper = op_on_unions(BinaryOp.MUL, u, u)
        assert shallow.contains_union(deeper)
        shallow = deeper


def test_mul_one_step_genuinely_fails_at_a_refined_pair():
    # multiplication is not one-step stable everywhere: the rank-2 pair
    # 21|33 at (2/5, 9/20) leaves a gap, which is why product claims are
    # supported by the oracle rather than certified here
    step = one_step_stable(
        BinaryOp.MUL, basic_interval(P, (2, 1)), basic_interval(P, (3, 3)), P
    )
    assert not step.stable
    with pytest.raises(StabilityRefusal):
        stable_closure(
            BinaryOp.MUL, WordSet.of((2,), (3,)), WordSet.of((2,), (3,)), P,
            "exhaustive", depth=2,
        )
