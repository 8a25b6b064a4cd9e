"""Path-based program representation.

A unified tree is simplified (unary chains collapsed), flattened into
abstract paths that keep only the top node and the leaf endpoints, and
summarised as a :class:`ProgramRepr`: how often each canonical path type
occurs plus a bag of the tokens seen on paths of that type.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from rpt.categories import PROGRAM
from rpt.errors import EmptyProgram
from rpt.frontend.nodes import UniNode


class PathType(NamedTuple):
    """Canonical path key: top category plus sorted leaf categories."""

    top: str
    leaf_cats: tuple[str, ...]

    @property
    def key(self) -> str:
        return f"{self.top}({','.join(self.leaf_cats)})"

    @classmethod
    def from_key(cls, key: str) -> PathType:
        top, _, rest = key.partition("(")
        if not rest.endswith(")") or not top:
            raise ValueError(f"malformed path type key {key!r}")
        cats = tuple(rest[:-1].split(","))
        return cls(top, cats)


@dataclass(frozen=True)
class AbstractPath:
    top: str
    leaves: tuple[tuple[str, str], ...]
    length: int

    @property
    def arity(self) -> int:
        return len(self.leaves)


@dataclass(frozen=True)
class ExtractionConfig:
    """Caps on pair-path enumeration; ``None`` disables a cap."""

    max_length: Optional[int] = 8
    max_paths: Optional[int] = 10_000

    def __post_init__(self) -> None:
        if self.max_length is not None and self.max_length < 1:
            raise ValueError("max_length must be >= 1")
        if self.max_paths is not None and self.max_paths < 1:
            raise ValueError("max_paths must be >= 1")

    def to_dict(self) -> dict:
        return {"max_length": self.max_length, "max_paths": self.max_paths}

    @classmethod
    def from_dict(cls, d: dict) -> ExtractionConfig:
        return cls(max_length=d.get("max_length"), max_paths=d.get("max_paths"))


UNCAPPED = ExtractionConfig(None, None)


@dataclass
class ProgramRepr:
    """Per-program path-type frequencies and token bags, keyed by ``PathType.key``."""

    program_id: str
    language: str
    freq: dict[str, int]
    text: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def path_total(self) -> int:
        return sum(self.freq.values())

    def path_types(self) -> list[PathType]:
        return [PathType.from_key(k) for k in sorted(self.freq)]

    def to_dict(self) -> dict:
        return {
            "id": self.program_id,
            "language": self.language,
            "freq": self.freq,
            "text": self.text,
            "path_total": self.path_total,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ProgramRepr:
        return cls(d["id"], d["language"], d["freq"], d.get("text", {}))


def simplify(tree: UniNode) -> UniNode:
    """Collapse unary chains of interior nodes, keeping the lowest one.

    The root stays ``PROGRAM``; an interior whose only child is a leaf is kept
    so the leaf's parent category survives. Childless interiors and tokenless
    leaves (other than operators) are removed.
    """
    out: dict[int, Optional[UniNode]] = {}
    stack: list[tuple[UniNode, bool]] = [(tree, False)]
    while stack:
        node, done = stack.pop()
        if not node.children:
            keep = node.token or node.category == "OPERATOR"
            out[id(node)] = UniNode(node.category, [], node.token) if keep else None
            continue
        if not done:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
            continue
        kids = [k for k in (out.pop(id(c)) for c in node.children) if k is not None]
        if node is tree:
            out[id(node)] = UniNode(PROGRAM, kids)
        elif not kids:
            out[id(node)] = None
        elif len(kids) == 1 and kids[0].children:
            out[id(node)] = kids[0]
        else:
            out[id(node)] = UniNode(node.category, kids)
    return out[id(tree)] if tree.children else UniNode(PROGRAM)


def extract_paths(tree: UniNode, cfg: ExtractionConfig = ExtractionConfig()) -> list[AbstractPath]:
    """Enumerate unary (parent, leaf) paths and leaf-pair paths through their LCA.

    Nodes are visited in preorder; at each node its direct leaves' unary paths
    come first, then the pair paths whose LCA is that node, ordered by the
    left-to-right positions of both leaves. Output stops at ``cfg.max_paths``.
    """
    max_len = cfg.max_length
    max_paths = cfg.max_paths
    # depth limit for a leaf below its LCA: the other endpoint adds at least one edge
    reach = None if max_len is None else max_len - 1

    # Post-order: per interior node, (child index, leaf position, depth) for usable leaves.
    leaf_pos: dict[int, int] = {}
    order: list[UniNode] = []
    stack = [tree]
    while stack:
        node = stack.pop()
        order.append(node)
        if not node.children:
            leaf_pos[id(node)] = len(leaf_pos)
        stack.extend(reversed(node.children))
    # ``order`` is preorder, so leaves were numbered left to right.
    below: dict[int, list[tuple[int, int, UniNode, int]]] = {}
    for node in reversed(order):
        if not node.children:
            continue
        acc = []
        for ci, child in enumerate(node.children):
            if not child.children:
                acc.append((ci, leaf_pos[id(child)], child, 1))
                continue
            for _, pos, leaf, depth in below[id(child)]:
                if reach is None or depth + 1 <= reach:
                    acc.append((ci, pos, leaf, depth + 1))
        below[id(node)] = acc

    paths: list[AbstractPath] = []
    limit = max_paths if max_paths is not None else float("inf")
    for node in order:
        if not node.children:
            continue
        for child in node.children:
            if not child.children:
                if len(paths) >= limit:
                    return paths
                paths.append(AbstractPath(node.category, ((child.category, child.token or ""),), 1))
        flat = below[id(node)]
        n = len(flat)
        # start index of the next sibling group for each entry
        nxt = [n] * n
        for a in range(n - 2, -1, -1):
            nxt[a] = a + 1 if flat[a + 1][0] != flat[a][0] else nxt[a + 1]
        top = node.category
        for a in range(n):
            _, _, l1, d1 = flat[a]
            e1 = (l1.category, l1.token or "")
            for b in range(nxt[a], n):
                d2 = flat[b][3]
                if max_len is not None and d1 + d2 > max_len:
                    continue
                if len(paths) >= limit:
                    return paths
                l2 = flat[b][2]
                paths.append(AbstractPath(top, (e1, (l2.category, l2.token or "")), d1 + d2))
    return paths


def canonical_type(p: AbstractPath) -> PathType:
    return PathType(p.top, tuple(sorted(cat for cat, _ in p.leaves)))


_SUBTOKEN = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+|[^\W\d_A-Za-z]+")
_STR_PREFIX = re.compile(r"^[@$uUrRbBfFL8]*(\"\"\"|[\"'`])")


def _split_identifier(text: str) -> list[str]:
    return [t.lower() for t in _SUBTOKEN.findall(text)]


def _strip_quotes(text: str) -> str:
    m = _STR_PREFIX.match(text)
    if not m:
        return text
    quote = m.group(1)
    body = text[m.end() :]
    if body.endswith(quote):
        body = body[: -len(quote)]
    return body


def tokenize(category: str, text: str) -> list[str]:
    """Split leaf text into tokens according to its category.

    Identifiers and type names split at camelCase, snake_case and
    letter/digit boundaries; numbers stay whole; strings split on whitespace.
    """
    if category in ("IDENT", "TYPE_REF"):
        return _split_identifier(text)
    if category == "LIT_NUM":
        return [text]
    if category == "LIT_STR":
        return [t.lower() for t in _strip_quotes(text).split()]
    if category in ("LIT_BOOL", "OPERATOR"):
        return [text] if text else []
    return _split_identifier(text)


def build_repr(program_id: str, language: str, paths: Iterable[AbstractPath]) -> ProgramRepr:
    freq: Counter[str] = Counter()
    bags: dict[str, Counter[str]] = {}
    tok_cache: dict[tuple[str, str], list[str]] = {}
    for p in paths:
        key = canonical_type(p).key
        freq[key] += 1
        bag = bags.get(key)
        if bag is None:
            bag = bags[key] = Counter()
        for leaf in p.leaves:
            toks = tok_cache.get(leaf)
            if toks is None:
                toks = tok_cache[leaf] = tokenize(*leaf)
            bag.update(toks)
    if not freq:
        raise EmptyProgram(program_id)
    text = {k: dict(b) for k, b in bags.items() if b}
    return ProgramRepr(program_id, language, dict(freq), text)
