"""Property path queries over a Web of Linked Data under context-based semantics."""
from .context import (
    EvalConfig,
    LookupBudgetExceeded,
    NotWebBoundedError,
    alpw1,
    eval_ctx_based,
    eval_ctx_reference,
    exec_alpw1,
)
from .multiset import EMPTY, UNIT, SolutionMultiset, ms_join, ms_minus, ms_project, ms_union
from .parser import QuerySyntaxError, parse_query
from .patterns import (
    Alternative,
    And,
    Inverse,
    Link,
    NegatedSet,
    Opt,
    PPPattern,
    Sequence,
    Star,
    Union_,
    cb_vars,
    vars_of,
)
from .rdf import EMPTY_MAPPING, SolutionMapping, Term, Triple, Variable, blank, iri, literal
from .safety import SafetyReport, cbv, is_web_safe
from .standard import alp1, eval_fullweb, eval_graph_pattern_standard, eval_standard
from .web import Document, FixtureWeb, WoLD, desk_fixture, load_fixture
