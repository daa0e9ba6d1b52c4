"""Functional dependencies as attribute-set pairs, and Armstrong-style inference.

Nothing here looks at data: closure, implication, minimal covers and the
1RHS realizability condition are all computed from the FDs alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import FDSyntaxError, SchemaError


def _fmt(attrs: Iterable[str]) -> str:
    return ",".join(sorted(attrs))


@dataclass(frozen=True)
class FD:
    lhs: frozenset[str]
    rhs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))
        if not self.rhs:
            raise ValueError("an FD needs a nonempty right-hand side")

    @classmethod
    def of(cls, lhs: str | Iterable[str], rhs: str | Iterable[str]) -> FD:
        """``FD.of("A,B", "C")`` or ``FD.of(["A", "B"], ["C"])``."""
        return cls(_split(lhs), _split(rhs))

    @property
    def attributes(self) -> frozenset[str]:
        return self.lhs | self.rhs

    @property
    def trivial(self) -> bool:
        return self.rhs <= self.lhs

    def sort_key(self) -> tuple:
        return (sorted(self.lhs), sorted(self.rhs))

    def __str__(self) -> str:
        return f"{_fmt(self.lhs)} -> {_fmt(self.rhs)}"


def _split(attrs: str | Iterable[str]) -> frozenset[str]:
    if isinstance(attrs, str):
        return frozenset(a.strip() for a in attrs.split(",") if a.strip())
    return frozenset(attrs)


class FDSet:
    """An ordered, duplicate-free collection of FDs.  Trivial FDs are dropped."""

    def __init__(self, fds: Iterable[FD] = ()):
        seen = {}
        for fd in fds:
            if not fd.trivial:
                seen.setdefault(fd, None)
        self.fds: tuple[FD, ...] = tuple(seen)

    def __iter__(self) -> Iterator[FD]:
        return iter(self.fds)

    def __len__(self) -> int:
        return len(self.fds)

    def __contains__(self, fd: object) -> bool:
        return fd in self.fds

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FDSet):
            return set(self.fds) == set(other.fds)
        return NotImplemented

    def __repr__(self) -> str:
        return "FDSet([" + "; ".join(map(str, self.fds)) + "])"

    @property
    def attributes(self) -> frozenset[str]:
        out: set[str] = set()
        for fd in self.fds:
            out |= fd.attributes
        return frozenset(out)

    def validate(self, attributes: Iterable[str]) -> None:
        unknown = self.attributes - set(attributes)
        if unknown:
            raise SchemaError(f"FDs mention unknown attributes: {sorted(unknown)}")


def decompose_rhs(fd: FD) -> list[FD]:
    """Split ``X -> Y`` into ``X -> {A}`` for every ``A`` in ``Y - X``.

    Components with ``A`` in ``X`` are trivial under every semantics and are
    dropped, so a trivial FD decomposes into the empty list.
    """
    return [FD(fd.lhs, {a}) for a in sorted(fd.rhs - fd.lhs)]


def attribute_closure(attrs: Iterable[str], fds: Iterable[FD]) -> frozenset[str]:
    closure = set(attrs)
    pending = list(fds)
    changed = True
    while changed:
        changed = False
        rest = []
        for fd in pending:
            if fd.lhs <= closure:
                if not fd.rhs <= closure:
                    closure |= fd.rhs
                    changed = True
            else:
                rest.append(fd)
        pending = rest
    return frozenset(closure)


def implies(fds: Iterable[FD], fd: FD) -> bool:
    return fd.rhs <= attribute_closure(fd.lhs, fds)


def equivalent(left: Iterable[FD], right: Iterable[FD]) -> bool:
    left, right = list(left), list(right)
    return all(implies(left, f) for f in right) and all(implies(right, f) for f in left)


def minimal_cover(fds: Iterable[FD]) -> FDSet:
    """Singleton right-hand sides, no extraneous LHS attribute, no redundant FD.

    Removal attempts run over LHS attributes in name order and over FDs in
    input order, so the result is deterministic.
    """
    work: list[FD] = []
    for fd in fds:
        for part in decompose_rhs(fd):
            if part not in work:
                work.append(part)

    for i, fd in enumerate(work):
        lhs = set(fd.lhs)
        for attr in sorted(fd.lhs):
            reduced = lhs - {attr}
            if fd.rhs <= attribute_closure(reduced, work):
                lhs = reduced
        work[i] = FD(lhs, fd.rhs)

    deduped: list[FD] = []
    for fd in work:
        if fd not in deduped:
            deduped.append(fd)

    result = list(deduped)
    for fd in deduped:
        others = [g for g in result if g != fd]
        if implies(others, fd):
            result = others
    return FDSet(result)


@dataclass(frozen=True)
class DeterminesGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def successors(self, node: str) -> set[str]:
        return {b for a, b in self.edges if a == node}

    def predecessors(self, node: str) -> set[str]:
        return {a for a, b in self.edges if b == node}


def _reachability(fds: Iterable[FD]) -> dict[str, set[str]]:
    direct: dict[str, set[str]] = {}
    for fd in fds:
        for a in fd.lhs:
            direct.setdefault(a, set()).update(fd.rhs - {a})
    reach: dict[str, set[str]] = {}
    for start in direct:
        seen: set[str] = set()
        stack = list(direct[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(direct.get(node, ()))
        reach[start] = seen
    return reach


def determines_graph(fds: Iterable[FD], nullable: Iterable[str]) -> DeterminesGraph:
    """Edge ``(A, B)`` between nullable attributes when ``A`` determines ``B``.

    ``A`` determines ``B`` when a chain of FDs leads from an FD with ``A``
    on its left to an FD with ``B`` on its right.  The chain may pass through
    non-nullable attributes.  Self-loops are not recorded.
    """
    nodes = frozenset(nullable)
    reach = _reachability(fds)
    edges = {
        (a, b)
        for a in nodes
        for b in reach.get(a, ())
        if b in nodes and b != a
    }
    return DeterminesGraph(nodes, frozenset(edges))


@dataclass(frozen=True)
class OneRHSViolation:
    kind: str  # "multiple-rhs" or "mutual"
    attributes: tuple[str, ...]
    fds: tuple[FD, ...] = ()

    def __str__(self) -> str:
        if self.kind == "multiple-rhs":
            return (
                f"nullable attribute {self.attributes[0]} is on the right of "
                f"{len(self.fds)} FDs: " + "; ".join(map(str, self.fds))
            )
        a, b = self.attributes
        return f"nullable attributes {a} and {b} determine each other"


@dataclass(frozen=True)
class OneRHSReport:
    cover: FDSet
    violations: tuple[OneRHSViolation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def culprits(self) -> frozenset[str]:
        return frozenset(a for v in self.violations for a in v.attributes)


def check_1rhs(fds: Iterable[FD], nullable: Iterable[str]) -> OneRHSReport:
    """Evaluate the 1RHS condition on the minimal cover of ``fds``."""
    nullable = frozenset(nullable)
    cover = minimal_cover(fds)
    violations: list[OneRHSViolation] = []
    for attr in sorted(nullable):
        on_rhs = tuple(fd for fd in cover if attr in fd.rhs)
        if len(on_rhs) > 1:
            violations.append(OneRHSViolation("multiple-rhs", (attr,), on_rhs))
    graph = determines_graph(cover, nullable)
    for a, b in sorted(graph.edges):
        if a < b and (b, a) in graph.edges:
            violations.append(OneRHSViolation("mutual", (a, b)))
    return OneRHSReport(cover, tuple(violations))


def parse_fd_spec(
    text: str, attributes: Iterable[str] | None = None, path: str | None = None
) -> tuple[FDSet, frozenset[str] | None]:
    """Parse ``A,B -> C`` lines plus an optional ``nullable: A,B`` directive.

    Returns the FDs and the declared nullable set (``None`` when undeclared,
    meaning every attribute).  With ``attributes`` given, names are checked
    against it.
    """
    known = None if attributes is None else set(attributes)
    fds: list[FD] = []
    nullable: set[str] | None = None

    def check_names(names: Iterable[str], lineno: int) -> None:
        if known is None:
            return
        unknown = sorted(set(names) - known)
        if unknown:
            raise FDSyntaxError(f"unknown attribute(s) {', '.join(unknown)}", lineno, path)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("nullable:"):
            names = _split(line.split(":", 1)[1])
            check_names(names, lineno)
            nullable = (nullable or set()) | names
            continue
        if line.count("->") != 1:
            raise FDSyntaxError(f"expected 'LHS -> RHS', got {raw.strip()!r}", lineno, path)
        left, right = line.split("->")
        lhs, rhs = _split(left), _split(right)
        if not rhs:
            raise FDSyntaxError("empty right-hand side", lineno, path)
        check_names(lhs | rhs, lineno)
        fds.append(FD(lhs, rhs))
    return FDSet(fds), None if nullable is None else frozenset(nullable)


def load_fd_spec(path, attributes: Iterable[str] | None = None):
    with open(path, encoding="utf-8") as fh:
        return parse_fd_spec(fh.read(), attributes, str(path))
