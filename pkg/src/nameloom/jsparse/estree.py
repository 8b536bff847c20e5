"""Generic traversal helpers over ESTree-shaped dict nodes."""

from __future__ import annotations

from typing import Iterator

_SKIP_KEYS = ("type", "start", "end", "raw", "regex")


def is_node(obj) -> bool:
    return isinstance(obj, dict) and "type" in obj


def iter_children(node: dict) -> Iterator[dict]:
    """Yield the direct child nodes of `node` in field order.

    Shorthand object properties alias one node as both key and value; each
    child is yielded once.
    """
    seen: set[int] = set()
    for key, val in node.items():
        if key in _SKIP_KEYS:
            continue
        if is_node(val):
            if id(val) not in seen:
                seen.add(id(val))
                yield val
        elif isinstance(val, list):
            for item in val:
                if is_node(item) and id(item) not in seen:
                    seen.add(id(item))
                    yield item


def walk(node: dict) -> Iterator[dict]:
    """Yield `node` and every descendant, depth-first, pre-order."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(iter_children(current))))


def ast_equal(a, b, ignore_identifier_names: bool = False) -> bool:
    """Structural equality of two trees, ignoring positions.

    With `ignore_identifier_names`, Identifier nodes compare equal whatever
    their names, which is the alpha-renaming notion of isomorphism.
    """
    if is_node(a) and is_node(b):
        if a["type"] != b["type"]:
            return False
        if a["type"] == "Identifier" and ignore_identifier_names:
            return True
        keys = (set(a) | set(b)) - {"start", "end", "raw"}
        return all(
            ast_equal(a.get(k), b.get(k), ignore_identifier_names) for k in keys
        )
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(
            ast_equal(x, y, ignore_identifier_names) for x, y in zip(a, b)
        )
    return a == b


def parent_map(root: dict) -> dict[int, dict]:
    """Map id(child) -> parent for every node under `root`."""
    parents: dict[int, dict] = {}
    for node in walk(root):
        for child in iter_children(node):
            parents[id(child)] = node
    return parents
