"""Source text -> :class:`ProgramRepr` in one call."""

from __future__ import annotations

from typing import Mapping, Optional

from rpt.errors import UnsupportedLanguage
from rpt.frontend import CategoryMapping, SourceUnit, UniNode, abstract_tree, load_mappings, parse
from rpt.representation import ExtractionConfig, ProgramRepr, build_repr, extract_paths, simplify


class Frontend:
    """Parses and represents source units with a fixed set of mapping tables."""

    def __init__(
        self,
        mappings: Optional[Mapping[str, CategoryMapping]] = None,
        config: ExtractionConfig = ExtractionConfig(),
        strict: bool = False,
    ) -> None:
        self.mappings = dict(mappings) if mappings is not None else load_mappings()
        self.config = config
        self.strict = strict

    def unified_tree(self, unit: SourceUnit) -> UniNode:
        mapping = self.mappings.get(unit.language)
        if mapping is None:
            raise UnsupportedLanguage(unit.language)
        return abstract_tree(parse(unit), mapping, self.strict)

    def represent(self, unit: SourceUnit) -> ProgramRepr:
        tree = simplify(self.unified_tree(unit))
        return build_repr(unit.id, unit.language, extract_paths(tree, self.config))
