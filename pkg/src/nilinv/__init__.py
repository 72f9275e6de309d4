"""Separating and generating trace invariants of nilpotent 2x2 and 3x3 matrix tuples."""
from .canon import ChangeOfBasis, CanonResult, classify_pair, nilpotent_jordan, stab_canon_J1, stab_canon_J2
from .errors import InputError, SamplingError
from .exact import E, J1, J2, Matrix, NilTuple, conjugate, is_nilpotent, sigma2, trace_product
from .fuzz import PairFamily, fuzz_canon, fuzz_theorem, gen_pair
from .pinning import replay_pinning_triples
from .span import (
    DEFAULT_SEED,
    ProductExpression,
    SpanDecision,
    in_span,
    indecomposability_report,
    product_basis,
    random_nilpotent,
)
from .witnesses import WitnessRecord, catalog, verify_minimality, verify_witness
from .words import (
    InvariantSet,
    TraceWord,
    all_words_agree,
    builtin_set,
    eval_word,
    evaluate_set,
    permute_indices,
    separate,
)

__all__ = [
    "ChangeOfBasis", "CanonResult", "classify_pair", "nilpotent_jordan", "stab_canon_J1", "stab_canon_J2",
    "InputError", "SamplingError",
    "E", "J1", "J2", "Matrix", "NilTuple", "conjugate", "is_nilpotent", "sigma2", "trace_product",
    "PairFamily", "fuzz_canon", "fuzz_theorem", "gen_pair",
    "replay_pinning_triples",
    "DEFAULT_SEED", "ProductExpression", "SpanDecision", "in_span", "indecomposability_report",
    "product_basis", "random_nilpotent",
    "WitnessRecord", "catalog", "verify_minimality", "verify_witness",
    "InvariantSet", "TraceWord", "all_words_agree", "builtin_set", "eval_word", "evaluate_set",
    "permute_indices", "separate",
]
