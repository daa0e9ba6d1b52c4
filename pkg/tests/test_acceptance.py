"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary
under "acceptance criteria", whatever the outcome.
"""

import contextlib
import random
import time

from conftest import FACULTY_ATTRS, FACULTY_ROWS, record_acceptance
from families import random_fd, random_relation, random_singleton_fd
from oracles import replay
from nullfd import (
    FD,
    IndexedRelation,
    Relation,
    attribute_closure,
    check_1rhs,
    check_lossless,
    decompose_step,
    holds,
    holds_classical,
    holds_literal,
    holds_strong,
    holds_super_reflexive,
    holds_weak,
    joint_weak,
    realize_literal,
    realize_sr_fd,
    realize_sr_set,
    world_oracle,
)

FAMILY_SIZE = 10_000


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    notes = {}
    try:
        yield notes
    except BaseException as exc:
        record_acceptance(f"[{number:2d}] FAIL {title}: {type(exc).__name__}: {exc}".splitlines()[0])
        raise
    extra = ", ".join(f"{k}={v}" for k, v in notes.items())
    elapsed = time.perf_counter() - start
    record_acceptance(f"[{number:2d}] PASS {title} ({elapsed:.2f}s{', ' + extra if extra else ''})")


def _family(seed=2024, count=FAMILY_SIZE):
    rng = random.Random(seed)
    for _ in range(count):
        r = random_relation(rng, max_rows=5, max_attrs=4, max_values=3, max_markers=3)
        yield rng, r, random_fd(rng, r.attributes)


def test_c01_verdict_matrix():
    with criterion(1, "verdict matrix on the faculty relation") as notes:
        start = time.perf_counter()
        r = Relation.from_rows(FACULTY_ATTRS, FACULTY_ROWS)
        modes = ("strong", "weak", "sr", "literal")
        got = {
            "chair->professor": [holds(r, FD.of("chair", "professor"), m).holds for m in modes],
            "professor->chair": [holds(r, FD.of("professor", "chair"), m).holds for m in modes],
        }
        elapsed = time.perf_counter() - start
        assert got == {
            "chair->professor": [False, True, False, True],
            "professor->chair": [False, True, True, False],
        }
        assert elapsed < 1.0
        notes["verdict_time"] = f"{elapsed * 1000:.1f}ms"


def test_c02_counterexamples():
    with criterion(2, "weak transitivity and strong-vs-literal/SR counterexamples"):
        r = Relation.from_rows("ABC", [["a", None, "b"], ["a", None, "c"]])
        ab, bc, ac = FD.of("A", "B"), FD.of("B", "C"), FD.of("A", "C")
        assert holds_weak(r, ab) and holds_weak(r, bc)
        assert not joint_weak(r, [ab, bc])
        assert not holds_weak(r, ac)
        assert not world_oracle(r, [ab, bc], "exists")

        s = Relation.from_rows("ABC", [["a", "b", None], ["c", "b", None]])
        assert not holds_strong(s, bc)
        assert holds_literal(s, bc) and holds_super_reflexive(s, bc)
        assert not world_oracle(s, [bc], "forall")


def test_c03_oracle_equivalence():
    with criterion(3, "strong/weak deciders agree with the world oracle") as notes:
        agree = total = 0
        for _, r, fd in _family():
            total += 1
            strong_ok = holds_strong(r, fd).holds == world_oracle(r, [fd], "forall").holds
            weak_ok = holds_weak(r, fd).holds == world_oracle(r, [fd], "exists").holds
            agree += strong_ok and weak_ok
        notes["relations"] = total
        notes["agreement"] = f"{100 * agree / total:.2f}%"
        assert total >= 10_000
        assert agree == total


def test_c04_lattice():
    with criterion(4, "implication lattice and strict gaps") as notes:
        violations = 0
        gaps = {"sr_not_literal": 0, "literal_not_sr": 0, "weak_only": 0}
        for _, r, fd in _family():
            strong, lit, sr, weak = (holds(r, fd, m).holds for m in ("strong", "literal", "sr", "weak"))
            violations += (strong and not lit) + (strong and not sr) + (lit and not weak) + (sr and not weak)
            gaps["sr_not_literal"] += sr and not lit
            gaps["literal_not_sr"] += lit and not sr
            gaps["weak_only"] += weak and not sr and not lit
        notes.update(gaps)
        assert violations == 0
        assert all(gaps.values())


def test_c05_armstrong():
    with criterion(5, "Armstrong axioms for literal and SR") as notes:
        counterexamples = checked = 0
        for rng, r, fd in _family():
            attrs = r.attributes
            z = {a for a in attrs if rng.random() < 0.4}
            g = FD(fd.rhs, [rng.choice(attrs)])
            sub = {a for a in sorted(fd.lhs) if rng.random() < 0.5}
            for mode in ("literal", "sr"):
                checked += 1
                if sub and not holds(r, FD(fd.lhs, sub), mode):
                    counterexamples += 1  # reflexivity
                if holds(r, fd, mode) and not holds(r, FD(fd.lhs | z, fd.rhs | z), mode):
                    counterexamples += 1  # augmentation
                if holds(r, fd, mode) and holds(r, g, mode) and not holds(r, FD(fd.lhs, g.rhs), mode):
                    counterexamples += 1  # transitivity
        notes["checked"] = checked
        assert counterexamples == 0


def test_c06_realizability():
    with criterion(6, "realization outputs are marker-free and classically valid") as notes:
        rng = random.Random(606)
        counts = {"literal": 0, "sr_fd": 0, "sr_set": 0}
        failures = 0
        while min(counts.values()) < 2000:
            r = random_relation(rng)
            fds = [random_singleton_fd(rng, r.attributes) for _ in range(rng.randint(1, 3))]
            if all(holds_literal(r, f) for f in fds):
                counts["literal"] += 1
                out, _ = realize_literal(r, fds)
                failures += out.has_nulls() or not all(holds_classical(out, f) for f in fds)
            if holds_super_reflexive(r, fds[0]):
                counts["sr_fd"] += 1
                out, _ = realize_sr_fd(r, fds[0])
                failures += out.has_nulls(fds[0].attributes) or not holds_classical(out, fds[0])
            if all(holds_super_reflexive(r, f) for f in fds) and check_1rhs(fds, r.attributes).ok:
                counts["sr_set"] += 1
                out, _ = realize_sr_set(r, fds)
                failures += out.has_nulls() or not all(holds_classical(out, f) for f in fds)
        faculty = Relation.from_rows(FACULTY_ATTRS, FACULTY_ROWS)
        out, _ = realize_sr_fd(faculty, FD.of("professor", "chair"))
        notes.update(counts)
        assert failures == 0
        assert out.row(1)["chair"] == "Jill"


def test_c07_one_rhs_fixtures():
    with criterion(7, "1RHS fixtures"):
        chain = [FD.of("E,D", "A"), FD.of("A", "F"), FD.of("A,B", "F")]
        assert check_1rhs(chain, "ABCDEF").ok
        split = [FD.of("E", "A"), FD.of("D", "A"), FD.of("A", "F"), FD.of("A,B", "F")]
        report = check_1rhs(split, "ABCDEF")
        assert not report.ok and report.culprits == {"A"}
        assert check_1rhs(split, set("ABCDEF") - {"A"}).ok
        mutual = chain + [FD.of("F", "A")]
        report = check_1rhs(mutual, "ABCDEF")
        assert not report.ok and report.culprits == {"A", "F"}
        assert check_1rhs(mutual, set("ABCDEF") - {"A", "F"}).ok
        assert attribute_closure({"F"}, mutual) >= {"A"}


def test_c08_enforcement_equivalence():
    with criterion(8, "incremental verdicts and |S| match batch re-check") as notes:
        sequences = writes = mismatches = 0
        for seed in range(120):
            results, _ = replay(seed, max_ops=200)
            sequences += 1
            for verdict, expected, measured, brute in results:
                writes += 1
                mismatches += verdict != expected or measured != brute
        notes["sequences"] = sequences
        notes["writes"] = writes
        assert sequences >= 100
        assert mismatches == 0


def test_c09_lossless_join():
    with criterion(9, "lossless join rule and decomposition") as notes:
        rng = random.Random(909)
        applicable = lossy = decompositions = 0
        for _ in range(FAMILY_SIZE):
            r = random_relation(rng)
            attrs = list(r.attributes)
            z = {a for a in attrs if rng.random() < 0.6} or {attrs[0]}
            w = (set(attrs) - z) | {a for a in sorted(z) if rng.random() < 0.4}
            if not w:
                continue
            report = check_lossless(r, z, w)
            if holds_literal(r, FD(z & w, w)):
                applicable += 1
                assert report.lossless, (r.records(), z, w)
            elif not report:
                lossy += 1
            fd = random_fd(rng, attrs)
            if not fd.trivial and fd.attributes != set(attrs) and holds_literal(r, fd):
                decompositions += 1
                assert decompose_step(r, fd).lossless
        notes.update(applicable=applicable, lossy=lossy, decompositions=decompositions)
        assert applicable and decompositions
        assert lossy >= 1


def test_c10_streamed_inserts():
    with criterion(10, "100k streamed inserts under one LFD") as notes:
        n = 100_000
        rng = random.Random(1010)
        ir = IndexedRelation(Relation.from_rows(["k", "v", "note"], []), literal_fds=[FD.of("k", "v")])
        probes = accepted = 0
        start = time.perf_counter()
        for i in range(n):
            roll = rng.random()
            if roll < 0.02:
                cells = [None, None, str(i)]
            else:
                key = str(rng.randrange(40_000))
                value = f"v{key}" if roll > 0.01 + 0.02 else "wrong"
                cells = [key, value, None if roll < 0.3 else str(i)]
            outcome = ir.try_insert(cells)
            probes += outcome.candidate_set_size
            accepted += outcome.accepted
        elapsed = time.perf_counter() - start
        notes.update(seconds=f"{elapsed:.1f}", probes=probes, accepted=accepted)
        assert elapsed < 60
        assert probes < n * n // 1000
        assert accepted < n
