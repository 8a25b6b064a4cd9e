"""Exception hierarchy.

Errors deriving from :class:`InputError` are caused by bad user input (source
files, flags, mapping tables) and map to CLI exit code 2; everything else
deriving from :class:`RptError` is operational and maps to exit code 1.
"""

from __future__ import annotations


class RptError(Exception):
    """Base class for all package errors."""


class InputError(RptError):
    """The caller supplied something malformed."""


class UnsupportedLanguage(InputError):
    def __init__(self, language: str) -> None:
        super().__init__(f"no adapter registered for language {language!r}")
        self.language = language


class SourceSyntaxError(InputError):
    """First parse failure in a source unit; line and column are 1-based."""

    def __init__(self, line: int, column: int, detail: str = "") -> None:
        msg = f"syntax error at line {line}, column {column}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.line = line
        self.column = column


class MappingFormatError(InputError):
    pass


class UnknownCategoryLabel(MappingFormatError):
    def __init__(self, label: str, where: str = "") -> None:
        super().__init__(f"unknown category label {label!r}" + (f" ({where})" if where else ""))
        self.label = label


class UnmappedKind(RptError):
    def __init__(self, kind: str) -> None:
        super().__init__(f"node kind {kind!r} has no mapping entry")
        self.kind = kind


class EmptyProgram(RptError):
    def __init__(self, program_id: str) -> None:
        super().__init__(f"program {program_id!r} produced no paths")
        self.program_id = program_id


class StoreError(RptError):
    pass


class ConfigMismatch(InputError):
    pass


class CorruptStore(StoreError):
    def __init__(self, offset: int, detail: str = "") -> None:
        super().__init__(f"corrupt record at byte offset {offset}" + (f": {detail}" if detail else ""))
        self.offset = offset


class DuplicateId(StoreError):
    def __init__(self, program_id: str) -> None:
        super().__init__(f"program id {program_id!r} already stored")
        self.program_id = program_id


class NotFound(StoreError, KeyError):
    def __init__(self, program_id: str) -> None:
        StoreError.__init__(self, f"program id {program_id!r} not in store")
        self.program_id = program_id

    def __str__(self) -> str:
        return self.args[0]


class StoreLocked(StoreError):
    pass


class EmptySamples(RptError, ValueError):
    pass


class IndexStoreMismatch(RptError):
    pass


class MissingUnit(InputError):
    def __init__(self, program_id: str) -> None:
        super().__init__(f"pair member {program_id!r} is not in the store")
        self.program_id = program_id
