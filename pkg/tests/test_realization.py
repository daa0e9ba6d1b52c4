import random

import pytest

from families import random_relation, random_singleton_fd
from nullfd import (
    FD,
    PreconditionFailed,
    Relation,
    check_1rhs,
    holds_classical,
    holds_literal,
    holds_super_reflexive,
    realize_literal,
    realize_sr_fd,
    realize_sr_set,
    world_oracle,
)
from nullfd.realization import LFD_SINGLE_FRESH, RHS_FRESH, RHS_GROUP_VALUE


def test_literal_faculty(faculty):
    fd = FD.of("chair", "professor")
    out, plan = realize_literal(faculty, [fd])
    assert not out.has_nulls()
    assert [s.value for s in plan] == ["⊥0"]
    assert plan.steps[0].reason == LFD_SINGLE_FRESH
    assert holds_classical(out, fd)


def test_literal_null_free_is_identity():
    r = Relation.from_rows("AB", [["a", "b"]])
    out, plan = realize_literal(r, [FD.of("A", "B")])
    assert len(plan) == 0 and out.records() == r.records()


def test_literal_one_value_for_all_markers():
    r = Relation.from_rows("AB", [["a", None], ["b", None]])
    out, plan = realize_literal(r, [FD.of("A", "B")])
    assert out.records() == [["a", "⊥0"], ["b", "⊥0"]]
    assert holds_classical(out, FD.of("A", "B"))


def test_literal_precondition(faculty):
    with pytest.raises(PreconditionFailed) as info:
        realize_literal(faculty, [FD.of("professor", "chair")])
    assert info.value.violations[0].witness == (1, 2)


def test_literal_plan_is_not_stepwise_safe():
    # filling one of two identical markers separates them; only the whole plan is safe
    r = Relation.from_rows("AB", [["a", None], ["a", None]])
    fd = FD.of("A", "B")
    out, plan = realize_literal(r, [fd])
    assert holds_literal(out, fd)
    assert not holds_literal(r.substitute(plan.assignment(upto=1)), fd)
    with pytest.raises(ValueError):
        plan.apply(r, upto=1)
    assert plan.apply(r, upto=0).records() == r.records()


def test_sr_fd_faculty_jill(faculty):
    out, plan = realize_sr_fd(faculty, FD.of("professor", "chair"))
    assert out.records()[0] == ["Joe", "Jill", "Mathematics"]
    assert plan.steps[0].reason == RHS_GROUP_VALUE


def test_sr_fd_nothing_to_do():
    r = Relation.from_rows("ABC", [["a", "b", None]])
    out, plan = realize_sr_fd(r, FD.of("A", "B"))
    assert len(plan) == 0 and out.records() == r.records()


def test_sr_fd_lhs_marker_gets_fresh_value():
    r = Relation.from_rows("AB", [[None, "b"], ["a", "b"]])
    fd = FD.of("A", "B")
    out, plan = realize_sr_fd(r, fd)
    assert out.records() == [["⊥0", "b"], ["a", "b"]]
    assert [s.reason for s in plan] == ["LHS-arbitrary"]
    assert holds_super_reflexive(out, fd)


def test_sr_fd_unknown_lhs_with_different_rhs_is_rejected():
    # a marker could equal "a", so B must agree; it does not, and the SR FD fails
    r = Relation.from_rows("AB", [[None, "b"], ["a", "c"]])
    assert not holds_super_reflexive(r, FD.of("A", "B"))
    with pytest.raises(PreconditionFailed):
        realize_sr_fd(r, FD.of("A", "B"))


def test_sr_fd_group_without_value_shares_one_fresh():
    r = Relation.from_rows("AB", [["a", None], ["a", None], ["b", None]])
    out, plan = realize_sr_fd(r, FD.of("A", "B"))
    assert out.records() == [["a", "⊥0"], ["a", "⊥0"], ["b", "⊥1"]]
    assert {s.reason for s in plan} == {RHS_FRESH}


def test_sr_fd_precondition(faculty):
    with pytest.raises(PreconditionFailed):
        realize_sr_fd(faculty, FD.of("chair", "professor"))


def test_sr_set_chain_order(chain_fds):
    rows = [
        [None, "b", None, None, "e", "f"],
        ["a", None, "c", "d", None, None],
        [None, None, None, "d", "e", None],
    ]
    r = Relation.from_rows("ABCDEF", rows)
    assert all(holds_super_reflexive(r, f) for f in chain_fds)
    out, plan = realize_sr_set(r, chain_fds)
    assert plan.rounds == [("D", "E"), ("A",), ("F",), ("B", "C")]
    assert not out.has_nulls()
    assert all(holds_classical(out, f) for f in chain_fds)


def test_sr_set_no_fds():
    r = Relation.from_rows("AB", [[None, "b"], ["a", None]])
    out, plan = realize_sr_set(r, [])
    assert out.records() == [["⊥0", "b"], ["a", "⊥1"]]


def test_sr_set_faculty_two_fds_on_chair(faculty):
    fds = [FD.of("professor", "chair"), FD.of("department", "chair")]
    assert all(holds_super_reflexive(faculty, f) for f in fds)
    with pytest.raises(PreconditionFailed, match="1RHS"):
        realize_sr_set(faculty, fds)


def test_sr_set_rejects_marker_in_non_nullable():
    r = Relation.from_rows("AB", [["a", None]])
    with pytest.raises(PreconditionFailed, match="non-nullable"):
        realize_sr_set(r, [FD.of("A", "B")], nullable={"A"})


def test_plan_lines_format(faculty):
    _, plan = realize_sr_fd(faculty, FD.of("professor", "chair"))
    occ = faculty.markers()[0][2].occ
    assert plan.lines() == [f"occ={occ} attr=chair value=Jill reason=RHS-group-value"]


def _sr_set_cases(seed, count):
    rng = random.Random(seed)
    found = 0
    while found < count:
        r = random_relation(rng, max_rows=5, max_attrs=4)
        if len(r.attributes) < 2:
            continue
        fds = [random_singleton_fd(rng, r.attributes) for _ in range(rng.randint(1, 3))]
        if not check_1rhs(fds, r.attributes).ok:
            continue
        if not all(holds_super_reflexive(r, f) for f in fds):
            continue
        found += 1
        yield r, fds


def test_sr_set_random_strong_g1_and_stepwise_safety():
    for r, fds in _sr_set_cases(5, 300):
        out, plan = realize_sr_set(r, fds)
        assert not out.has_nulls()
        assert all(holds_classical(out, f) for f in fds)
        for k in range(len(plan) + 1):
            partial = plan.apply(r, upto=k)
            assert all(holds_super_reflexive(partial, f) for f in fds)
        assert world_oracle(out, fds, "exists")


def test_sr_fd_random_g1_and_stepwise_safety():
    rng = random.Random(9)
    done = 0
    while done < 300:
        r = random_relation(rng)
        fd = random_singleton_fd(rng, r.attributes)
        if not holds_super_reflexive(r, fd):
            continue
        done += 1
        out, plan = realize_sr_fd(r, fd)
        assert not out.has_nulls(fd.attributes)
        assert holds_classical(out, fd)
        for k in range(len(plan) + 1):
            assert holds_super_reflexive(plan.apply(r, upto=k), fd)


def test_literal_random_strong_g1():
    rng = random.Random(10)
    done = 0
    while done < 300:
        r = random_relation(rng)
        fds = [random_singleton_fd(rng, r.attributes) for _ in range(rng.randint(1, 3))]
        if not all(holds_literal(r, f) for f in fds):
            continue
        done += 1
        out, _ = realize_literal(r, fds)
        assert not out.has_nulls()
        assert all(holds_classical(out, f) for f in fds)
