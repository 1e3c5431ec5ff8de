"""Nonmonotonic belief revision for joke understanding.

A listener is a knowledge base of strict and default rules; System Z ranks
the defaults, the ranking induces a possibility distribution and a
plausibility order, and revision by that order decides whether a statement
is surprising, revealing, potentially funny or incongruous.
"""

from .defaults import (
    DefaultRule,
    KnowledgeBase,
    RankedDistribution,
    Stratification,
    StrictRule,
    build_distribution,
    necessity,
    possibility,
    tolerates,
    z_stratify,
)
from .errors import (
    EmptyRevision,
    EmptyUniverse,
    EquivalentPunchlines,
    FormulaSyntaxError,
    InconsistentDefaults,
    InconsistentStrict,
    KbSyntaxError,
    ReasoningError,
    UndefinedLevel,
    UniverseTooLarge,
    UnknownAtom,
)
from .humor import (
    Conditioning,
    GradualLevels,
    JokeAnalysis,
    NormKind,
    NormRef,
    Statement,
    analyze,
    analyze_cascade,
    incongruity,
    is_potentially_funny,
    is_revealing,
    is_surprising,
    more_efficient,
    revealing_level,
    surprise_level,
)
from .kbio import KbDocument, load_kb, parse_kb, render_kb, render_report
from .logic import (
    BOTTOM,
    TOP,
    Atom,
    AtomUniverse,
    Formula,
    Interpretation,
    ModelSet,
    atoms,
    entails,
    is_consistent,
    models_of,
    parse_formula,
)
from .orders import (
    OrderMethod,
    PlausibilityOrder,
    build_order,
    check_km_postulates,
    min_models,
    nm_entails,
    revise,
)

__version__ = "0.1.0"
