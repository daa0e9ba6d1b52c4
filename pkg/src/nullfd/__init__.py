"""Functional dependencies over relations with null markers."""

from .design import (
    Decomposition,
    check_literal_fk,
    check_lossless,
    decompose_step,
    literal_join,
    literal_keys,
)
from .enforcement import IndexedRelation, WriteOutcome, build, intersect_sorted
from .errors import (
    FDSyntaxError,
    InitialViolation,
    NullFDError,
    NullPresentError,
    PreconditionFailed,
    SchemaError,
    SizeGuardError,
)
from .fds import (
    FD,
    FDSet,
    attribute_closure,
    check_1rhs,
    decompose_rhs,
    determines_graph,
    implies,
    minimal_cover,
    parse_fd_spec,
)
from .realization import RealizationPlan, realize_literal, realize_sr_fd, realize_sr_set
from .relation import (
    Null,
    Relation,
    Row,
    Schema,
    TruthValue,
    eq3,
    identical,
    is_duplicate,
    is_null,
    load_csv,
    project,
    read_csv,
)
from .semantics import (
    Mode,
    Valuation,
    Verdict,
    Violation,
    holds,
    holds_classical,
    holds_literal,
    holds_strong,
    holds_super_reflexive,
    holds_weak,
    joint_weak,
    world_oracle,
)

__version__ = "0.1.0"
