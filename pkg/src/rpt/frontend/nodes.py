"""Tree node types shared by the adapters and the abstraction step."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional


@dataclass(frozen=True)
class SourceUnit:
    id: str
    language: str
    body: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("SourceUnit.id must be non-empty")


@dataclass(eq=True)
class ConcreteNode:
    """Adapter-native parse tree node. Leaves carry ``token``; interiors do not."""

    kind: str
    children: list[ConcreteNode] = field(default_factory=list)
    token: Optional[str] = None
    span: tuple[int, int] = (0, 0)

    def iter_preorder(self) -> Iterator[ConcreteNode]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[ConcreteNode]:
        return [n for n in self.iter_preorder() if not n.children and n.token is not None]


@dataclass(eq=True)
class UniNode:
    """Node of the language-agnostic tree; ``category`` is a vocabulary label."""

    category: str
    children: list[UniNode] = field(default_factory=list)
    token: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def iter_preorder(self) -> Iterator[UniNode]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[UniNode]:
        return [n for n in self.iter_preorder() if not n.children and n.token is not None]

    def mirrored(self) -> UniNode:
        """Copy with the child order of every node reversed."""
        return UniNode(self.category, [c.mirrored() for c in reversed(self.children)], self.token)

    def to_sexpr(self) -> str:
        """Compact text form used by golden tests, e.g. ``(VAR_DECL TYPE_REF:int IDENT:x)``."""
        if not self.children:
            return self.category if self.token is None else f"{self.category}:{self.token}"
        return "(" + " ".join([self.category] + [c.to_sexpr() for c in self.children]) + ")"


# Alias: the root of a unified tree is just a node.
UniTree = UniNode
