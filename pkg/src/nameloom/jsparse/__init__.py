"""Self-contained ECMAScript front end producing ESTree-shaped dict ASTs."""

from .estree import ast_equal, is_node, iter_children, parent_map, walk
from .parser import parse
from .tokenizer import Token, Tokenizer

__all__ = [
    "ast_equal",
    "is_node",
    "iter_children",
    "parent_map",
    "parse",
    "walk",
    "Token",
    "Tokenizer",
]
