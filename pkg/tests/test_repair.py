"""Repair advice generation and application."""

from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, strategies as st

from planforge.pddl import Literal, OperatorSchema, Plan, PlanStep
from planforge.repair import (
    ADD_EFFECT,
    NoFlaw,
    REMOVE_OFFENDING_DELETE,
    REMOVE_PRECONDITION,
    StaleAdvice,
    UnknownChoice,
    advise,
    apply_advice,
)
from planforge.validator import applicability, bind_step, progress, validate


@pytest.fixture()
def broken_report(d1b, p1, pl1):
    return validate(d1b, p1, pl1)


@pytest.fixture()
def broken_advice(d1b, p1, pl1, broken_report):
    return advise(d1b, p1, pl1, broken_report)


def test_option_a_shape(broken_advice):
    action = broken_advice.option_a.new_action
    assert action.name == "achieve-in"
    assert action.params == (("?x1", "package"), ("?x2", "truck"))
    assert action.preconditions == ()
    assert action.effects == (Literal("in", ("?x1", "?x2")),)
    assert broken_advice.option_a.bound_args == ("pkg", "trk")


def test_option_b_contents(broken_advice):
    kinds = [(m.kind, m.target_operator, m.source_step) for m in broken_advice.option_b]
    assert (ADD_EFFECT, "load", 1) in kinds
    assert (REMOVE_PRECONDITION, "unload", None) in kinds
    add = next(m for m in broken_advice.option_b if m.kind == ADD_EFFECT)
    assert add.change == Literal("in", ("?pkg", "?trk"))
    # deterministic order: sorted by (kind, source step)
    keys = [(m.kind, m.source_step or 0) for m in broken_advice.option_b]
    assert keys == sorted(keys)


def test_advice_text_mentions_flaw(broken_advice):
    assert "(in pkg trk)" in broken_advice.advice_text
    assert "achieve-in" in broken_advice.advice_text


def test_no_flaw(d1, p1, pl1):
    report = validate(d1, p1, pl1)
    with pytest.raises(NoFlaw):
        advise(d1, p1, pl1, report)


def test_bind_failure_rejected(d1, p1, pl1):
    bad = Plan((PlanStep("teleport", ()),))
    report = validate(d1, p1, bad)
    with pytest.raises(NoFlaw):
        advise(d1, p1, bad, report)


def test_unexpectedly_present_flaw(d1, p1):
    prob = dataclasses.replace(p1, init=p1.init + (("in", "pkg", "trk"),))
    plan = Plan((PlanStep("load", ("pkg", "trk", "a")),))
    report = validate(d1, prob, plan)
    assert report.flaw.unsatisfied == (
        (("in", "pkg", "trk"), "negative", "unexpectedly-present"),
    )
    advice = advise(d1, prob, plan, report)
    action = advice.option_a.new_action
    assert action.name == "forbid-in"
    assert action.effects == (Literal("in", ("?x1", "?x2"), positive=False),)
    kinds = [(m.kind, m.target_operator) for m in advice.option_b]
    assert (REMOVE_PRECONDITION, "load") in kinds


def test_apply_option_a(d1b, p1, pl1, broken_advice):
    repaired, diagnostics = apply_advice(d1b, broken_advice, "A")
    assert [a.name for a in repaired.actions] == ["load", "unload", "drive", "achieve-in"]
    assert diagnostics == []
    augmented = Plan(pl1.steps[:2] + (PlanStep("achieve-in", ("pkg", "trk")),) + pl1.steps[2:])
    assert validate(repaired, p1, augmented).valid


def test_apply_option_a_name_collision(d1b, p1, pl1, broken_advice):
    once, _ = apply_advice(d1b, broken_advice, "A")
    twice, _ = apply_advice(once, broken_advice, "A")
    assert [a.name for a in twice.actions[-2:]] == ["achieve-in", "achieve-in-2"]


def test_apply_option_b_restores_d1(d1, d1b, p1, pl1, broken_advice):
    index = next(
        i for i, m in enumerate(broken_advice.option_b)
        if m.kind == ADD_EFFECT and m.target_operator == "load"
    )
    repaired, diagnostics = apply_advice(d1b, broken_advice, "B", index)
    assert repaired == d1
    assert diagnostics == []
    assert validate(repaired, p1, pl1).valid


def test_apply_remove_precondition(d1b, p1, pl1, broken_advice):
    index = next(
        i for i, m in enumerate(broken_advice.option_b) if m.kind == REMOVE_PRECONDITION
    )
    repaired, _ = apply_advice(d1b, broken_advice, "B", index)
    unload = repaired.action("unload")
    assert Literal("in", ("?pkg", "?trk")) not in unload.preconditions
    assert validate(repaired, p1, pl1).valid


def test_apply_stale_advice(d1b, broken_advice):
    index = next(
        i for i, m in enumerate(broken_advice.option_b) if m.kind == REMOVE_PRECONDITION
    )
    without_unload = dataclasses.replace(
        d1b, actions=tuple(a for a in d1b.actions if a.name != "unload")
    )
    with pytest.raises(StaleAdvice):
        apply_advice(without_unload, broken_advice, "B", index)


def test_apply_stale_after_params_changed(d1b, broken_advice):
    index = next(
        i for i, m in enumerate(broken_advice.option_b) if m.kind == ADD_EFFECT
    )
    mangled_load = OperatorSchema("load", (("?a", "package"),), (), ())
    mangled = dataclasses.replace(
        d1b, actions=tuple(mangled_load if a.name == "load" else a for a in d1b.actions)
    )
    with pytest.raises(StaleAdvice):
        apply_advice(mangled, broken_advice, "B", index)


def test_apply_unknown_choice(d1b, broken_advice):
    with pytest.raises(UnknownChoice):
        apply_advice(d1b, broken_advice, "C")
    with pytest.raises(UnknownChoice):
        apply_advice(d1b, broken_advice, "B", 99)
    with pytest.raises(UnknownChoice):
        apply_advice(d1b, broken_advice, "B")


def test_goal_failure_advice(d1, p1, pl1):
    prob = dataclasses.replace(p1, goal=(Literal("in", ("pkg", "trk")),))
    report = validate(d1, prob, pl1)
    advice = advise(d1, prob, pl1, report)
    assert advice.flaw is None
    assert advice.unsatisfied_goal == (Literal("in", ("pkg", "trk")),)
    assert advice.option_a.new_action.name == "achieve-in"
    kinds = {(m.kind, m.target_operator, m.source_step) for m in advice.option_b}
    assert (ADD_EFFECT, "load", 1) in kinds
    # unload deleted the goal atom at step 3, so dropping that effect is offered
    assert (REMOVE_OFFENDING_DELETE, "unload", 3) in kinds


def test_lifting_soundness(d1b, p1, pl1, broken_advice):
    flawed_atom = broken_advice.flaw.unsatisfied[0][0]
    schemas = {a.name: a for a in d1b.actions}
    for mod in broken_advice.option_b:
        schema = schemas[mod.target_operator]
        if mod.source_step is not None:
            step = pl1.steps[mod.source_step - 1]
        else:
            step = pl1.steps[broken_advice.flaw.step_index - 1]
        binding = dict(zip(schema.param_names(), step.args))
        assert mod.change.substitute(binding).atom() == flawed_atom


atom_universe = [
    ("at", o, p) for o in ("pkg", "trk") for p in ("a", "b")
] + [("in", "pkg", "trk")]


@given(st.sets(st.sampled_from(atom_universe)))
def test_achiever_universality(state):
    """The achiever applies in any state and establishes the flawed literal."""
    from planforge.validator import GroundAction

    achiever = GroundAction(
        "achieve-in", ("pkg", "trk"),
        frozenset(), frozenset(), frozenset({("in", "pkg", "trk")}), frozenset(),
    )
    ok, unsatisfied = applicability(frozenset(state), achiever)
    assert ok and unsatisfied == ()
    assert ("in", "pkg", "trk") in progress(frozenset(state), achiever)


def test_repair_sufficiency(d1b, p1, pl1, broken_report, broken_advice):
    """Single-literal flaw: the bound achiever inserted right before the
    flawed step makes that step applicable."""
    assert len(broken_report.flaw.unsatisfied) == 1
    repaired, _ = apply_advice(d1b, broken_advice, "A")
    achiever_step = PlanStep("achieve-in", broken_advice.option_a.bound_args)
    flaw_at = broken_report.flaw.step_index
    state = frozenset(p1.init)
    for step in pl1.steps[: flaw_at - 1]:
        state = progress(state, bind_step(repaired, p1, step))
    state = progress(state, bind_step(repaired, p1, achiever_step))
    flawed = bind_step(repaired, p1, pl1.steps[flaw_at - 1])
    assert applicability(state, flawed)[0]
