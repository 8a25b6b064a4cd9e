"""Source parsing and relabelling into the unified category tree."""

from rpt.frontend.adapters import get_adapter, language_for_path, languages, parse
from rpt.frontend.mapping import CategoryMapping, abstract_tree, load_mapping, load_mappings
from rpt.frontend.nodes import ConcreteNode, SourceUnit, UniNode, UniTree

__all__ = [
    "CategoryMapping",
    "ConcreteNode",
    "SourceUnit",
    "UniNode",
    "UniTree",
    "abstract_tree",
    "get_adapter",
    "language_for_path",
    "languages",
    "load_mapping",
    "load_mappings",
    "parse",
]
