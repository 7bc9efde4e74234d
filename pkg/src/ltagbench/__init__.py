"""Grammar-engineering workbench for feature-based lexicalized TAG.

Pipeline: morphology lookup -> N-best trigram tagging -> tree selection ->
chart parsing with feature unification, plus database maintenance, frequency
filtering with retry, parseval scoring, and an HTTP service for the browser
workbench.
"""

from .features import (
    EMPTY,
    Bindings,
    FeatureEquation,
    FeatureStructure,
    UnifyFailure,
    Var,
    adjunction_unify,
    finalize,
    format_gorn,
    format_term,
    fs,
    parse_equation,
    parse_equations,
    parse_gorn,
    parse_term,
    resolve,
    substitution_unify,
    unify,
)
from .grammar import (
    AnchoredTree,
    AnchorFailure,
    Category,
    ElementaryTree,
    Grammar,
    GrammarSyntaxError,
    GrammarValidationError,
    TreeFamily,
    TreeNode,
    anchor,
    dump_grammar,
    dump_tree,
    load_grammar,
    load_grammar_file,
    parse_tree_block,
    validate_tree,
)
from .parser import (
    ChartItem,
    Derivation,
    DerivationError,
    DerivedNode,
    ParseOutcome,
    count_constituents,
    extract_derived,
    parse,
    recognize,
)

__version__ = "0.1.0"
