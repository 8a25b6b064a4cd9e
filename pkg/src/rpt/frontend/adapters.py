"""Language adapters: source text -> :class:`ConcreteNode` trees.

Each adapter wraps a tree-sitter grammar.  Conversion applies three
adapter-level normalisations before any category mapping happens:

* a named node whose children are all anonymous tokens (``int``, ``true``,
  ``public static``) becomes a single leaf holding the node's full text;
* kinds listed in ``atomic_kinds`` (string literals, composite type
  expressions, imports, annotations) become leaves regardless of shape;
* ``relabel`` rules rename a child's kind by its syntactic role, e.g. C#
  identifiers in a ``type`` field become ``type_identifier`` so that they map
  to the same category as Java's ``type_identifier``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional

import tree_sitter

from rpt.errors import SourceSyntaxError, UnsupportedLanguage
from rpt.frontend.nodes import ConcreteNode, SourceUnit

# (parent kind or "*", field name or None) -> new kind, for children whose kind is in the rule's set
RelabelRules = dict[tuple[str, Optional[str]], str]


@dataclass
class TreeSitterAdapter:
    language: str
    grammar: Callable[[], object]
    extensions: tuple[str, ...]
    atomic_kinds: frozenset[str] = frozenset()
    relabel: RelabelRules = field(default_factory=dict)
    relabel_kinds: frozenset[str] = frozenset({"identifier"})

    @functools.cached_property
    def _parser(self) -> tree_sitter.Parser:
        return tree_sitter.Parser(tree_sitter.Language(self.grammar()))

    def _relabel(self, parent_kind: str, field_name: Optional[str], kind: str) -> str:
        if kind not in self.relabel_kinds or not self.relabel:
            return kind
        for key in ((parent_kind, field_name), ("*", field_name), (parent_kind, None)):
            new = self.relabel.get(key)
            if new is not None:
                return new
        return kind

    def parse(self, unit: SourceUnit) -> ConcreteNode:
        data = unit.body.encode("utf-8")
        tree = self._parser.parse(data)
        root = tree.root_node
        if root.has_error:
            line, col, detail = _first_failure(root, data)
            raise SourceSyntaxError(line, col, detail)
        return self._convert(root, data)

    def _convert(self, ts_root, data: bytes) -> ConcreteNode:
        atomic = self.atomic_kinds

        def make(ts_node, kind: str) -> tuple[ConcreteNode, bool]:
            span = (ts_node.start_byte, ts_node.end_byte)
            children = ts_node.children
            if (
                kind in atomic
                or ts_node.type in atomic
                or not children
                or (ts_node.is_named and not any(c.is_named for c in children))
            ) and ts_node is not ts_root:
                text = data[span[0] : span[1]].decode("utf-8", errors="replace")
                return ConcreteNode(kind, [], text, span), False
            return ConcreteNode(kind, [], None, span), True

        root, expand = make(ts_root, ts_root.type)
        stack = [(ts_root, root)] if expand else []
        while stack:
            ts_node, node = stack.pop()
            parent_kind = ts_node.type
            for i, child in enumerate(ts_node.children):
                kind = child.type
                if self.relabel:
                    kind = self._relabel(parent_kind, ts_node.field_name_for_child(i), kind)
                cnode, expand = make(child, kind)
                node.children.append(cnode)
                if expand:
                    stack.append((child, cnode))
        return root


def _first_failure(root, data: bytes) -> tuple[int, int, str]:
    """Locate the first ERROR/MISSING node in source order.

    An ERROR node made up only of anonymous tokens (a dangling ``=`` or ``(``)
    means the parser stalled at the token that followed it, so that token's
    position is reported instead.
    """
    best = None
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_error or node.is_missing:
            if best is None or node.start_byte < best.start_byte:
                best = node
            continue
        if node.has_error:
            stack.extend(node.children)
    if best is None:  # pragma: no cover - has_error guarantees a hit
        return 1, 1, ""
    if best.is_missing:
        return (*_position(data, best.start_byte), f"missing {best.type!r}")
    snippet = data[best.start_byte : best.end_byte].decode("utf-8", errors="replace")[:40]
    detail = f"unexpected {snippet!r}"
    at = best.start_byte
    if best.children and not any(c.is_named for c in best.children):
        nxt = best.next_sibling
        while nxt is not None and nxt.end_byte == nxt.start_byte:
            nxt = nxt.next_sibling
        if nxt is not None:
            at = nxt.start_byte
            token = data[nxt.start_byte : nxt.end_byte].decode("utf-8", errors="replace")[:40]
            detail = f"unexpected {token!r} after {snippet!r}"
    return (*_position(data, at), detail)


def _position(data: bytes, offset: int) -> tuple[int, int]:
    """1-based line and character column of a byte offset."""
    line_start = data.rfind(b"\n", 0, offset) + 1
    line = data.count(b"\n", 0, offset) + 1
    return line, len(data[line_start:offset].decode("utf-8", errors="replace")) + 1


def _java():
    import tree_sitter_java

    return tree_sitter_java.language()


def _csharp():
    import tree_sitter_c_sharp

    return tree_sitter_c_sharp.language()


def _javascript():
    import tree_sitter_javascript

    return tree_sitter_javascript.language()


_ADAPTERS: dict[str, TreeSitterAdapter] = {}


def register_adapter(adapter: TreeSitterAdapter) -> None:
    _ADAPTERS[adapter.language] = adapter


def get_adapter(language: str) -> TreeSitterAdapter:
    try:
        return _ADAPTERS[language]
    except KeyError:
        raise UnsupportedLanguage(language) from None


def languages() -> list[str]:
    return sorted(_ADAPTERS)


def language_for_path(path: str) -> Optional[str]:
    lower = path.lower()
    for adapter in _ADAPTERS.values():
        if lower.endswith(adapter.extensions):
            return adapter.language
    return None


def parse(unit: SourceUnit) -> ConcreteNode:
    """Parse ``unit.body`` with the adapter registered for ``unit.language``."""
    return get_adapter(unit.language).parse(unit)


register_adapter(
    TreeSitterAdapter(
        "java",
        _java,
        (".java",),
        atomic_kinds=frozenset(
            {
                "string_literal",
                "character_literal",
                "generic_type",
                "array_type",
                "scoped_type_identifier",
                "annotated_type",
                "import_declaration",
                "package_declaration",
                "annotation",
                "marker_annotation",
                "type_parameters",
                "throws",
                "modifiers",
            }
        ),
    )
)

register_adapter(
    TreeSitterAdapter(
        "csharp",
        _csharp,
        (".cs",),
        atomic_kinds=frozenset(
            {
                "string_literal",
                "verbatim_string_literal",
                "interpolated_string_expression",
                "raw_string_literal",
                "character_literal",
                "generic_name",
                "array_type",
                "nullable_type",
                "pointer_type",
                "tuple_type",
                "qualified_name",
                "using_directive",
                "attribute_list",
                "type_parameter_list",
                "type_parameter_constraints_clause",
                "modifier",
            }
        ),
        relabel={
            ("*", "type"): "type_identifier",
            ("*", "returns"): "type_identifier",
            ("base_list", None): "type_identifier",
            ("namespace_declaration", "name"): "namespace_name",
            ("file_scoped_namespace_declaration", "name"): "namespace_name",
        },
        relabel_kinds=frozenset({"identifier", "qualified_name"}),
    )
)

register_adapter(
    TreeSitterAdapter(
        "javascript",
        _javascript,
        (".js", ".mjs", ".cjs", ".jsx"),
        atomic_kinds=frozenset({"string", "template_string", "regex", "import_statement"}),
    )
)
