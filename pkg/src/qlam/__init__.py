"""A quantum lambda calculus: linear-algebraic term distributions, a
call-by-value rewrite engine, a type system of norm-1 superpositions, and a
compiler from isometries to case trees over qubit registers."""

from .config import DEFAULT_TOLERANCE, get_tolerance, set_tolerance, tolerance
from .inner import inner_product, norm, orthogonal
from .quantum import (
    FileFormatError,
    GateMatrix,
    NotAnIsometry,
    StateVector,
    basis_value,
    case_construct,
    compile_isometry,
    decode,
    encode,
    expand_gate,
    format_matrix,
    gate_library,
    matrix_apply,
    parse_circuit,
    parse_matrix,
    run_circuit,
)
from .rewrite import (
    DEFAULT_MAX_STEPS,
    NormalForm,
    StepLimitExceeded,
    Stepped,
    Stuck,
    StuckError,
    normalize,
    reduce_term,
    step,
    trace_normalize,
)
from .surface import ParseError, SourceSpan, parse_program, parse_type, pretty_print
from .syntax import (
    App,
    Distribution,
    InlV,
    InrV,
    Lam,
    LetPair,
    Match,
    PairV,
    PureTerm,
    Seq,
    Var,
    Void,
    add,
    alpha_eq,
    canonicalize,
    congruent,
    dist_alpha_eq,
    free_vars,
    free_vars_dist,
    is_value,
    is_value_distribution,
    mk_app,
    mk_inl,
    mk_inr,
    mk_let,
    mk_match,
    mk_pair,
    mk_seq,
    scale,
    show_dist,
    show_term,
    singleton,
    substitute,
    substitute_dist,
)
from .typecheck import (
    Derivation,
    ErrorKind,
    TypeCheckError,
    check_distribution,
    check_orthogonal_judgment,
    check_program,
    check_pure,
    type_of_program,
)
from .types import (
    BOOL,
    Arrow,
    Prod,
    Sharp,
    Sum,
    Type,
    UNIT,
    Unit,
    Unknown,
    is_flat,
    join_types,
    peel_sharps,
    qubits,
    sharp_lift,
    show_type,
    subtype,
)

__version__ = "0.1.0"
