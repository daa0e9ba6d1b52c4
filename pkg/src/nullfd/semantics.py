"""Deciding whether an FD holds over a relation with null markers.

Five readings are supported:

* classical: no markers allowed in the FD's columns;
* literal: a marker matches another marker and nothing else;
* super-reflexive: Codd's three-valued comparison, where "not false" on the
  left must give "not false" on the right;
* strong / weak: the FD holds in every / some possible world.

Strong and weak satisfaction are decided without enumerating worlds (a
pairwise test and a grouping test respectively).  :func:`world_oracle`
enumerates worlds over a finite adequate domain and serves as the reference
those shortcuts are tested against.
"""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import NullPresentError, SizeGuardError
from .fds import FD, decompose_rhs
from .relation import Null, Relation, fresh_values, identity_key

DEFAULT_ORACLE_CAP = 10**6
_CHUNK = 256


class Mode(enum.Enum):
    CLASSICAL = "classical"
    LITERAL = "literal"
    SUPER_REFLEXIVE = "sr"
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class Violation:
    fd: FD
    witness: tuple[int, int]
    detail: str

    def __str__(self) -> str:
        a, b = self.witness
        return f"{self.fd} violated by rows {a},{b}: {self.detail}"


@dataclass(frozen=True)
class Valuation:
    """Occurrence id -> value for the null markers of a relation."""

    assignment: Mapping[int, str] = field(default_factory=dict)

    def apply(self, r: Relation) -> Relation:
        return r.substitute(self.assignment)

    def covers(self, r: Relation) -> bool:
        return all(m.occ in self.assignment for _, _, m in r.markers())


@dataclass(frozen=True)
class Verdict:
    """Outcome of a satisfaction check; truthy iff the FD (set) holds."""

    holds: bool
    violation: Violation | None = None
    valuation: Valuation | None = None

    def __bool__(self) -> bool:
        return self.holds


_HOLDS = Verdict(True)


def _sorted_rows(r: Relation):
    return sorted(r.rows, key=lambda row: row.id)


def _encode(rows, positions) -> np.ndarray:
    """Integer codes per cell; markers become -1."""
    codes: dict[str, int] = {}
    out = np.empty((len(rows), len(positions)), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, p in enumerate(positions):
            cell = row.cells[p]
            out[i, j] = -1 if isinstance(cell, Null) else codes.setdefault(cell, len(codes))
    return out


def _encode_pair(rows, lhs_pos, rhs_pos):
    both = _encode(rows, tuple(lhs_pos) + tuple(rhs_pos))
    k = len(lhs_pos)
    return both[:, :k], both[:, k:]


def _not_false(codes: np.ndarray, sl: slice) -> np.ndarray:
    """(chunk, n) mask: the three-valued comparison on these columns is not false."""
    a = codes[sl][:, None, :]
    b = codes[None, :, :]
    return ((a == b) | (a < 0) | (b < 0)).all(axis=-1)


def _is_false(codes: np.ndarray, sl: slice) -> np.ndarray:
    a = codes[sl][:, None, :]
    b = codes[None, :, :]
    return ((a != b) & (a >= 0) & (b >= 0)).any(axis=-1)


def _both_equal_present(codes: np.ndarray, sl: slice) -> np.ndarray:
    a = codes[sl][:, None, :]
    b = codes[None, :, :]
    return ((a == b) & (a >= 0) & (b >= 0)).all(axis=-1)


def _first_pair(n: int, mask_for) -> tuple[int, int] | None:
    """Smallest (i, j), i < j, in row-major order where ``mask_for(slice)`` is set."""
    cols = np.arange(n)
    for start in range(0, n, _CHUNK):
        stop = min(n, start + _CHUNK)
        mask = mask_for(slice(start, stop))
        mask &= cols[None, :] > np.arange(start, stop)[:, None]
        hits = np.argwhere(mask)
        if len(hits):
            i, j = hits[0]
            return start + int(i), int(j)
    return None


def holds_literal(r: Relation, fd: FD) -> Verdict:
    """Rows identical on the LHS must be identical on the RHS."""
    if fd.trivial:
        return _HOLDS
    rows = _sorted_rows(r)
    lhs_pos = r.schema.indices(fd.lhs)
    rhs_pos = r.schema.indices(fd.rhs)
    groups: dict[tuple, list] = defaultdict(list)
    for row in rows:
        groups[identity_key(row, lhs_pos)].append(row)
    best = None
    for members in groups.values():
        first = identity_key(members[0], rhs_pos)
        for other in members[1:]:
            if identity_key(other, rhs_pos) != first:
                pair = (members[0].id, other.id)
                if best is None or pair < best:
                    best = pair
                break
    if best is None:
        return _HOLDS
    return Verdict(False, Violation(fd, best, "identical on LHS, not identical on RHS"))


def holds_super_reflexive(r: Relation, fd: FD) -> Verdict:
    """Whenever the LHS comparison is not false, the RHS comparison is not false."""
    if fd.trivial:
        return _HOLDS
    rows = _sorted_rows(r)
    lhs, rhs = _encode_pair(rows, r.schema.indices(fd.lhs), r.schema.indices(fd.rhs))
    pair = _first_pair(len(rows), lambda sl: _not_false(lhs, sl) & _is_false(rhs, sl))
    if pair is None:
        return _HOLDS
    i, j = pair
    return Verdict(
        False,
        Violation(fd, (rows[i].id, rows[j].id), "LHS comparison not false, RHS comparison false"),
    )


def holds_strong(r: Relation, fd: FD) -> Verdict:
    """Holds in every possible world.

    For ``X -> A`` with ``A`` outside ``X``, two distinct rows whose LHS
    comparison is not false can be made LHS-equal by some valuation; since
    the RHS markers are independent of the LHS ones, the FD then survives
    every such world only if both RHS cells are present and equal.
    """
    rows = _sorted_rows(r)
    best = None
    for part in decompose_rhs(fd):
        lhs, rhs = _encode_pair(rows, r.schema.indices(part.lhs), r.schema.indices(part.rhs))
        pair = _first_pair(
            len(rows), lambda sl: _not_false(lhs, sl) & ~_both_equal_present(rhs, sl)
        )
        if pair is not None and (best is None or pair < best):
            best = pair
    if best is None:
        return _HOLDS
    i, j = best
    return Verdict(
        False,
        Violation(fd, (rows[i].id, rows[j].id), "some world equates the LHS but not the RHS"),
    )


def holds_weak(r: Relation, fd: FD) -> Verdict:
    """Holds in at least one possible world; returns a witnessing valuation.

    Giving every LHS marker its own fresh value leaves only rows with fully
    present, equal LHS in a common class, which is the fewest classes any
    world can produce.  Within each class an RHS column may then carry at most
    one distinct present value; its markers take that value (or a common fresh
    value when the class has none).
    """
    rows = _sorted_rows(r)
    parts = decompose_rhs(fd)
    lhs_pos = r.schema.indices(fd.lhs)
    classes: dict[tuple, list] = defaultdict(list)
    for row in rows:
        key = identity_key(row, lhs_pos)
        if None not in key:
            classes[key].append(row)

    best = None
    for part in parts:
        a = r.schema.index(next(iter(part.rhs)))
        for members in classes.values():
            first_value = None
            for row in members:
                cell = row.cells[a]
                if isinstance(cell, Null):
                    continue
                if first_value is None:
                    first_value = row
                elif cell != first_value.cells[a]:
                    pair = (first_value.id, row.id)
                    if best is None or pair < best:
                        best = pair
                    break
    if best is not None:
        return Verdict(
            False,
            Violation(fd, best, "equal present LHS with two different present RHS values"),
        )

    fresh = fresh_values(r.values())
    assignment: dict[int, str] = {}
    for part in parts:
        a = r.schema.index(next(iter(part.rhs)))
        for members in classes.values():
            present = [row.cells[a] for row in members if not isinstance(row.cells[a], Null)]
            value = present[0] if present else None
            for row in members:
                cell = row.cells[a]
                if isinstance(cell, Null):
                    if value is None:
                        value = next(fresh)
                    assignment[cell.occ] = value
    for _, _, marker in r.markers():
        if marker.occ not in assignment:
            assignment[marker.occ] = next(fresh)
    return Verdict(True, valuation=Valuation(assignment))


def holds_classical(r: Relation, fd: FD) -> Verdict:
    if r.has_nulls(fd.lhs | fd.rhs):
        raise NullPresentError(
            f"{fd}: classical FDs are undefined over null markers in {sorted(fd.lhs | fd.rhs)}"
        )
    return holds_literal(r, fd)


_CHECKERS = {
    Mode.CLASSICAL: holds_classical,
    Mode.LITERAL: holds_literal,
    Mode.SUPER_REFLEXIVE: holds_super_reflexive,
    Mode.STRONG: holds_strong,
    Mode.WEAK: holds_weak,
}


def holds(r: Relation, fd: FD, mode: Mode | str) -> Verdict:
    return _CHECKERS[Mode(mode)](r, fd)


def _world_checker(rows, fds, positions):
    """Compile FDs into index pairs over the relevant-column projection."""
    compiled = []
    for fd in fds:
        lhs = tuple(positions[a] for a in sorted(fd.lhs))
        rhs = tuple(positions[a] for a in sorted(fd.rhs))
        compiled.append((lhs, rhs))

    def satisfied(world) -> bool:
        for lhs, rhs in compiled:
            seen = {}
            for row in world:
                k = tuple(row[i] for i in lhs)
                v = tuple(row[i] for i in rhs)
                if seen.setdefault(k, v) != v:
                    return False
        return True

    return satisfied


def world_oracle(
    r: Relation,
    fds: Iterable[FD],
    quantifier: str = "exists",
    cap: int = DEFAULT_ORACLE_CAP,
) -> Verdict:
    """Enumerate possible worlds and test the FDs classically in each.

    Only markers in columns mentioned by ``fds`` are enumerated.  Values are
    drawn from the relation's constants in those columns plus one fresh value
    per marker, which is enough to realise any pattern of equalities and
    inequalities among markers and constants.

    For ``exists`` a satisfying world is returned as the valuation; for
    ``forall`` a falsifying one is returned when the verdict is negative.
    """
    if quantifier not in ("exists", "forall"):
        raise ValueError(f"quantifier must be 'exists' or 'forall', not {quantifier!r}")
    fds = [f for f in fds if not f.trivial]
    relevant = r.schema.ordered(set().union(*(f.attributes for f in fds)) if fds else ())
    positions = {a: i for i, a in enumerate(relevant)}
    src = [r.schema.index(a) for a in relevant]
    markers = [m for _, _, m in r.markers(relevant)]
    constants = sorted(r.values(relevant))
    k = len(markers)
    domain = constants + list(itertools.islice(fresh_values(constants), k))
    if k and len(domain) ** k > cap:
        raise SizeGuardError(f"{len(domain)}^{k} worlds exceed the oracle cap of {cap}")

    slot = {m.occ: n for n, m in enumerate(markers)}
    template = [[row.cells[p] for p in src] for row in r.rows]
    holes = [
        (i, j, slot[c.occ]) for i, row in enumerate(template) for j, c in enumerate(row) if isinstance(c, Null)
    ]
    satisfied = _world_checker(template, fds, positions)
    rest = fresh_values(domain)

    def total(choice) -> Valuation:
        assignment = {m.occ: v for m, v in zip(markers, choice)}
        for _, _, m in r.markers():
            assignment.setdefault(m.occ, next(rest))
        return Valuation(assignment)

    for choice in itertools.product(domain, repeat=k):
        world = [list(row) for row in template]
        for i, j, n in holes:
            world[i][j] = choice[n]
        ok = satisfied(world)
        if quantifier == "exists" and ok:
            return Verdict(True, valuation=total(choice))
        if quantifier == "forall" and not ok:
            return Verdict(False, valuation=total(choice))
    return Verdict(quantifier == "forall")


def joint_weak(r: Relation, fds: Iterable[FD], cap: int = DEFAULT_ORACLE_CAP) -> Verdict:
    """Is there one possible world in which every FD holds at once?"""
    return world_oracle(r, fds, "exists", cap)
