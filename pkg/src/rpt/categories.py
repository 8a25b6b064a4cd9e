"""The closed, language-independent category vocabulary."""

from __future__ import annotations

PROGRAM = "PROGRAM"
OTHER = "OTHER"

INTERIOR_CATEGORIES = (
    "PROGRAM",
    "TYPE_DECL",
    "FUNC_DECL",
    "PARAM",
    "BLOCK",
    "VAR_DECL",
    "ASSIGN",
    "CALL",
    "MEMBER_ACCESS",
    "INDEX_ACCESS",
    "COND",
    "LOOP",
    "SWITCH",
    "RETURN",
    "THROW",
    "TRY",
    "LAMBDA",
    "BINOP",
    "UNOP",
    "CAST",
    "NEW",
)

LEAF_CATEGORIES = frozenset({"IDENT", "TYPE_REF", "LIT_NUM", "LIT_STR", "LIT_BOOL", "OPERATOR"})

# 27 labels; OTHER is the sentinel for unmapped kinds in lenient mode.
VOCABULARY = frozenset(INTERIOR_CATEGORIES) | LEAF_CATEGORIES
ALL_LABELS = VOCABULARY | {OTHER}

assert len(VOCABULARY) == 27


def is_label(label: str) -> bool:
    return label in ALL_LABELS
