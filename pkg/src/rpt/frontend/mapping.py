"""Category mapping tables and CST -> unified tree abstraction."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from rpt.categories import ALL_LABELS, LEAF_CATEGORIES, OTHER, PROGRAM
from rpt.errors import MappingFormatError, UnknownCategoryLabel, UnmappedKind
from rpt.frontend.nodes import ConcreteNode, UniNode

log = logging.getLogger(__name__)

MAPPING_DIR_ENV = "RPT_MAPPING_DIR"
BUILTIN_MAPPING_DIR = Path(__file__).parent / "mappings"


@dataclass(frozen=True)
class CategoryMapping:
    language: str
    entries: dict[str, str]
    prune_set: frozenset[str]

    def __post_init__(self) -> None:
        for kind, label in self.entries.items():
            if label not in ALL_LABELS:
                raise UnknownCategoryLabel(label, f"entry for {kind!r}")
        overlap = self.prune_set.intersection(self.entries)
        if overlap:
            raise MappingFormatError(f"kinds both mapped and pruned: {sorted(overlap)}")


def load_mapping(path: Union[str, os.PathLike], language: Optional[str] = None) -> CategoryMapping:
    """Read a ``kind<TAB>CATEGORY`` / ``prune<TAB>kind`` table.

    The language defaults to the file stem (``java.map`` -> ``java``).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MappingFormatError(f"{path}: not UTF-8 ({exc})") from None
    entries: dict[str, str] = {}
    prune: set[str] = set()
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise MappingFormatError(f"{path}:{lineno}: expected two tab-separated fields")
        left, right = parts
        if left == "prune":
            prune.add(right)
            continue
        if right not in ALL_LABELS:
            raise UnknownCategoryLabel(right, f"{path}:{lineno}")
        if entries.get(left, right) != right:
            raise MappingFormatError(f"{path}:{lineno}: conflicting entries for {left!r}")
        entries[left] = right
    if not entries and prune:
        log.warning("mapping %s has no entries, only prune rules", path)
    return CategoryMapping(language or path.stem, entries, frozenset(prune))


def mapping_dir(override: Union[str, os.PathLike, None] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(MAPPING_DIR_ENV)
    return Path(env) if env else BUILTIN_MAPPING_DIR


def load_mappings(directory: Union[str, os.PathLike, None] = None) -> dict[str, CategoryMapping]:
    """Load every ``*.map`` file in the mapping directory, keyed by language."""
    found = {}
    for p in sorted(mapping_dir(directory).glob("*.map")):
        m = load_mapping(p)
        found[m.language] = m
    return found


def abstract_tree(cst: ConcreteNode, mapping: CategoryMapping, strict: bool = False) -> UniNode:
    """Relabel a concrete tree into the unified category vocabulary.

    Pruned leaves disappear, pruned interiors splice their surviving children
    into the parent, and interiors left with no children are dropped, as are
    token-bearing nodes whose label is an interior category. The root
    is always ``PROGRAM``.
    """
    entries = mapping.entries
    prune = mapping.prune_set

    def label(kind: str) -> str:
        cat = entries.get(kind)
        if cat is None:
            if strict:
                raise UnmappedKind(kind)
            return OTHER
        return cat

    if cst.kind not in entries and strict and cst.kind not in prune:
        raise UnmappedKind(cst.kind)

    # Iterative post-order: each frame collects the unified nodes its subtree yields.
    stack: list[tuple[ConcreteNode, int, list[UniNode]]] = [(cst, 0, [])]
    while True:
        node, idx, acc = stack[-1]
        if idx < len(node.children):
            stack[-1] = (node, idx + 1, acc)
            child = node.children[idx]
            if child.children:
                stack.append((child, 0, []))
            elif child.kind not in prune and child.token:
                cat = label(child.kind)
                # a statement with no named parts (``return;``) carries no leaf content
                if cat in LEAF_CATEGORIES or cat == OTHER:
                    acc.append(UniNode(cat, [], child.token))
            continue
        stack.pop()
        if not stack:
            return UniNode(PROGRAM, acc)
        parent_acc = stack[-1][2]
        if node.kind in prune:
            parent_acc.extend(acc)
        elif acc:
            parent_acc.append(UniNode(label(node.kind), acc))
