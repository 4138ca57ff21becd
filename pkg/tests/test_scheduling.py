"""Machine scheduling on top of the constraint solver: compilation, bounds, search."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from randnets import oracle_makespan, random_instance
from tcsp import (
    DimensionMismatch,
    EmptyLabel,
    InvalidInstance,
    MalformedDomain,
    NetworkFormatError,
    Outcome,
    Schedule,
    SchedulingInstance,
    Task,
    bdac3,
    build_tcsp,
    compile_instance,
    instance_from_json,
    olb,
    optimum,
    parse_union,
    schedule_metrics,
)

U = parse_union


def _inst(tasks, precedences=(), disjunctions=()):
    return SchedulingInstance(
        tasks=tuple(tasks), precedences=tuple(precedences), disjunctions=tuple(disjunctions)
    )


TWO_TASKS = _inst([Task(3), Task(2)], disjunctions=[(1, 2)])
CHAIN_TASKS = _inst([Task(2), Task(3), Task(4)], precedences=[(1, 2), (2, 3)])


# -- tasks and compilation ----------------------------------------------------------------


def test_task_coerces_to_exact_rationals():
    t = Task("7/2", 1, "9/2")
    assert t.duration == Fraction(7, 2) and t.release == 1 and t.due == Fraction(9, 2)
    assert Task(3).release is None and Task(3).due is None
    with pytest.raises(TypeError):
        Task(0.5)


def test_compile_windows():
    net = compile_instance(_inst([Task(2, 3, 9), Task(2, None, 4), Task(1)]))
    assert net.entry(0, 1) == U("[3,7]")  # [release, due - duration]
    assert net.entry(0, 2) == U("[0,2]")  # release defaults to zero
    assert net.entry(0, 3) == U("[0,+inf)")  # no due date: open-ended


def test_compile_precedence_and_disjunction():
    net = compile_instance(TWO_TASKS)
    assert net.entry(0, 1) == U("[0,+inf)")
    assert net.entry(1, 2) == U("(-inf,-2] u [3,+inf)")
    chain = compile_instance(CHAIN_TASKS)
    assert chain.entry(1, 2) == U("[2,+inf)")
    assert chain.entry(2, 3) == U("[3,+inf)")


def test_compile_intersects_overlapping_requirements():
    inst = _inst([Task(3), Task(2)], precedences=[(1, 2)], disjunctions=[(1, 2)])
    net = compile_instance(inst)
    # ordered before X2 anyway, so only the [d1,+inf) piece survives
    assert net.entry(1, 2) == U("[3,+inf)")


def test_compile_detects_contradictions():
    inst = _inst([Task(3), Task(2)], precedences=[(1, 2), (2, 1)])
    with pytest.raises(EmptyLabel):
        compile_instance(inst)


@pytest.mark.parametrize(
    "tasks, precedences, disjunctions",
    [
        ([], (), ()),  # no tasks
        ([Task(0)], (), ()),  # zero duration
        ([Task(-1)], (), ()),  # negative duration
        ([Task(2, -1)], (), ()),  # negative release
        ([Task(5, 0, 3)], (), ()),  # window cannot hold the task
        ([Task(1), Task(1)], ((1, 3),), ()),  # precedence index out of range
        ([Task(1), Task(1)], (), ((2, 2),)),  # a task cannot exclude itself
        ([Task(1), Task(1)], ((0, 1),), ()),  # tasks are numbered from one
    ],
)
def test_compile_rejects_invalid_instances(tasks, precedences, disjunctions):
    with pytest.raises(InvalidInstance):
        compile_instance(_inst(tasks, precedences, disjunctions))


# -- the lower bound ----------------------------------------------------------------------


def test_olb_is_the_best_completion_over_earliest_starts():
    net = build_tcsp(
        4,
        [
            (0, 1, U("[10,20]")),
            (0, 2, U("[40,50]")),
            (0, 3, U("[20,30]")),
            (0, 4, U("[60,70]")),
        ],
    )
    assert olb(net, (5, 5, 5, 5)) == 65
    assert olb(net, (5, 5, 5, "11/2")) == Fraction(131, 2)


def test_olb_on_a_filtered_compiled_instance():
    # arc-consistency cannot order the disjunction (each task may start at 0
    # in one orientation), so both earliest starts stay 0 and the bound is
    # the longest duration -- strictly below the true optimum of 5
    net = compile_instance(TWO_TASKS)
    assert bdac3(net).outcome is Outcome.CONSISTENT
    assert olb(net, (3, 2)) == 3


def test_olb_error_cases():
    net = build_tcsp(1, [(0, 1, U("[1,2]"))])
    with pytest.raises(DimensionMismatch):
        olb(net, (1, 1))
    with pytest.raises(InvalidInstance):
        olb(net, (0,))
    for label in ["(1,5]", "(-inf,5]", "{}"]:
        bad = build_tcsp(1, [(0, 1, U("[1,2]"))])
        bad.set_pair(0, 1, U(label))
        with pytest.raises(MalformedDomain):
            olb(bad, (1,))


def test_olb_of_a_fragmented_domain_uses_the_lowest_piece():
    # a due-date window straddling a disjunction gap leaves a two-piece
    # domain; the earliest start is still the bound
    net = build_tcsp(1, [(0, 1, U("[3,4] u [9,10]"))])
    assert olb(net, (2,)) == 5


# -- optimal schedules -----------------------------------------------------------------------


def test_optimum_two_task_golden():
    sched = optimum(TWO_TASKS)
    assert sched == Schedule(
        start_times=(Fraction(2), Fraction(0)),
        makespan=Fraction(5),
        latency=Fraction(0),
    )


def test_optimum_chain_golden():
    sched = optimum(CHAIN_TASKS)
    assert sched.start_times == (0, 2, 5)
    assert sched.makespan == 9 and sched.latency == 0


def test_optimum_reports_release_driven_latency():
    sched = optimum(_inst([Task(3, 2)]))
    assert sched.start_times == (2,) and sched.makespan == 5 and sched.latency == 2


def test_optimum_contradictory_instance_is_infeasible():
    assert optimum(_inst([Task(3), Task(2)], precedences=[(1, 2), (2, 1)])) is None


def test_optimum_infeasible_windows():
    # both tasks must fit in [0,3] but can never overlap
    inst = _inst([Task(2, 0, 3), Task(2, 0, 3)], disjunctions=[(1, 2)])
    assert optimum(inst) is None


def test_optimum_respects_due_dates_when_choosing_an_order():
    # X1 is due early, so it must run first even though X2 released first
    inst = _inst([Task(2, None, 2), Task(3, 0)], disjunctions=[(1, 2)])
    sched = optimum(inst)
    assert sched.start_times == (0, 2) and sched.makespan == 5


def test_optimum_agrees_with_the_orientation_oracle():
    rng = random.Random(550221)
    feasible = infeasible = 0
    for _ in range(40):
        inst = random_instance(rng)
        expected = oracle_makespan(inst)
        sched = optimum(inst)
        if expected is None:
            infeasible += 1
            assert sched is None
            continue
        feasible += 1
        assert sched is not None and sched.makespan == expected
        _assert_schedule_valid(inst, sched)
    assert feasible >= 20 and infeasible >= 3


def _assert_schedule_valid(inst: SchedulingInstance, sched: Schedule):
    starts = sched.start_times
    durations = [t.duration for t in inst.tasks]
    for start, task in zip(starts, inst.tasks):
        assert start >= (task.release or 0)
        if task.due is not None:
            assert start + task.duration <= task.due
    for a, b in inst.precedences:
        assert starts[a - 1] + durations[a - 1] <= starts[b - 1]
    for a, b in inst.disjunctions:
        assert (
            starts[a - 1] + durations[a - 1] <= starts[b - 1]
            or starts[b - 1] + durations[b - 1] <= starts[a - 1]
        )
    assert sched.makespan == max(s + d for s, d in zip(starts, durations))
    assert sched.latency == min(starts)


def test_optimum_is_never_below_the_initial_lower_bound():
    rng = random.Random(98310)
    checked = 0
    for _ in range(40):
        inst = random_instance(rng)
        try:
            net = compile_instance(inst)
        except EmptyLabel:
            continue
        if bdac3(net).outcome is not Outcome.CONSISTENT:
            continue
        bound = olb(net, [t.duration for t in inst.tasks])
        sched = optimum(inst)
        if sched is None:
            continue
        checked += 1
        assert sched.makespan >= bound
    assert checked >= 20


# -- metrics ------------------------------------------------------------------------------------


def test_schedule_metrics():
    assert schedule_metrics((0, 2, 5), (2, 3, 4)) == (9, 0)
    assert schedule_metrics((3,), (2,)) == (5, 3)
    with pytest.raises(DimensionMismatch):
        schedule_metrics((0, 1), (2,))
    with pytest.raises(InvalidInstance):
        schedule_metrics((), ())


# -- JSON instances -------------------------------------------------------------------------------


GOLDEN_DOC = """
{
  "tasks": [{"d": 3, "release": 0, "due": 10}, {"d": 2}],
  "precedences": [[1, 2]],
  "disjunctions": []
}
"""


def test_instance_json_golden():
    inst = instance_from_json(GOLDEN_DOC)
    assert inst == _inst([Task(3, 0, 10), Task(2)], precedences=[(1, 2)])
    sched = optimum(inst)
    assert sched.start_times == (0, 3) and sched.makespan == 5


def test_instance_json_accepts_rational_strings():
    inst = instance_from_json('{"tasks": [{"d": "7/2"}]}')
    assert inst.tasks[0].duration == Fraction(7, 2)


@pytest.mark.parametrize(
    "doc",
    [
        "{",  # syntax
        "[]",  # not an object
        '{"tasks": [{"release": 1}]}',  # missing duration
        '{"tasks": [{"d": 0.5}]}',  # floats are rejected
        '{"tasks": [{"d": true}]}',
        '{"tasks": [{"d": 1}], "precedences": [[1]]}',  # pairs have two ends
        '{"tasks": [{"d": 1}], "disjunctions": [[1, "2"]]}',
        '{"tasks": [{"d": 1}], "precedences": 3}',
    ],
)
def test_instance_json_rejects_malformed_documents(doc):
    with pytest.raises(NetworkFormatError):
        instance_from_json(doc)


def test_instance_json_with_no_tasks_is_well_formed_but_uncompilable():
    # emptiness is an instance property, not a document-shape one
    inst = instance_from_json('{"tasks": []}')
    assert inst.tasks == ()
    with pytest.raises(InvalidInstance):
        compile_instance(inst)
