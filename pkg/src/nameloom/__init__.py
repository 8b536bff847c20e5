"""nameloom: corpus-driven variable name recovery for minified JavaScript.

The pipeline: parse a corpus of readable code, store every variable's
relation graph and co-occurrence postings in an inverted index, then name
the variables of a minified file by matching their usage contexts against
that index and beam-searching a joint assignment.
"""

__version__ = "0.1.0"

from .errors import (BuildError, EmptyRecovery, EmptyTestSet, LoadError,
                     MatchError, NameloomError, ParseError)
from .extraction import (FunctionRecord, RelationEdge, RelationGraph, RelType,
                         analyze_source, parse_functions, tokenize_name)
from .index import CorpusIndex, build_index, load_index, save_index
from .minify import alpha_minify
from .recovery import (CandidateList, RecoveryConfig, RecoveryResult,
                       combine_st, mvar, recover_file, recover_function)
from .svc import match_score, single_var_candidates
from .tsc import task_candidates, task_score, task_score_tokenized
from .mvc import assoc, mc_score, mc_score_combined

__all__ = [
    "BuildError", "EmptyRecovery", "EmptyTestSet", "LoadError", "MatchError",
    "NameloomError", "ParseError",
    "FunctionRecord", "RelationEdge", "RelationGraph", "RelType",
    "analyze_source", "parse_functions", "tokenize_name",
    "CorpusIndex", "build_index", "load_index", "save_index",
    "alpha_minify",
    "CandidateList", "RecoveryConfig", "RecoveryResult",
    "combine_st", "mvar", "recover_file", "recover_function",
    "match_score", "single_var_candidates",
    "task_candidates", "task_score", "task_score_tokenized",
    "assoc", "mc_score", "mc_score_combined",
    "__version__",
]
