"""Almost periodic infinite words: constructions, finite-state machinery,
marker splits and the reversible-automaton reduction, and brute-force
verification oracles at desk scale."""

from .errors import (
    AlphabetError,
    ApwordsError,
    FiniteOutputError,
    InvariantViolation,
    ResourceLimitError,
    SchemeError,
    SpecParseError,
)
from .words import (
    BINARY,
    Alphabet,
    FuncSequence,
    SchemeSpec,
    SequenceHandle,
    SpecNode,
    StreamSequence,
    TauSpec,
    Word,
    complement,
    make_sequence,
    parse_scheme_file,
    parse_spec,
    periodic,
    prepend,
    product,
    projections,
    quintuple_limit,
    read,
    scheme_generate,
    scheme_validate,
    thm21,
    thm21_block,
    thm21_tau,
    thue_morse,
    tm_block,
    tm_triple_fixture,
    word,
)
from .regulators import (
    Regulator,
    identity_plus,
    is_monotone_sampled,
    linear,
    load_table_regulator,
    table_regulator,
    parse_regulator,
    periodic_regulator,
    pointwise_max,
    reg_eval,
    reg_iterated_bound,
    reg_reversible_distance,
    reg_split,
    reg_thm21,
    scaled,
)
from .automata import (
    Automaton,
    Homomorphism,
    ReductionReport,
    ReductionStep,
    SplitResult,
    Transducer,
    automaton_text,
    block_automaton,
    cyclic_automaton,
    hom_apply,
    homomorphism_text,
    infinite_letters,
    is_reversible,
    letter_images,
    load_automaton,
    load_homomorphism,
    load_transducer,
    reduce_to_reversible,
    run,
    split,
    transducer_decompose,
    transducer_run,
)
from .analysis import (
    Counterexample,
    EmpiricalRegulator,
    Verdict,
    aligned_occurrences,
    check_regulator,
    check_sap,
    default_cut_grid,
    empirical_regulator,
    is_cube_free,
    occurrences,
    pr_upper_estimate,
    verdict_fields,
    verdict_tsv,
)

__version__ = "0.1.0"
