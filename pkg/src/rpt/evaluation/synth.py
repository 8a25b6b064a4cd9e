"""Seeded synthetic corpora.

Two generators live here:

* :func:`synth_reprs` draws :class:`ProgramRepr` records directly. Path types
  come from the real category vocabulary with Zipf-like popularity, and
  per-type frequencies are geometric (the discrete exponential), so index
  statistics look like those of parsed code at any scale.
* :func:`synth_java_program` renders small random Java classes from a
  statement model, and :func:`mutate_program` derives clones from the same
  model by renaming identifiers and reordering statements.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from rpt.categories import INTERIOR_CATEGORIES, LEAF_CATEGORIES
from rpt.representation import PathType, ProgramRepr
from rpt.store import Store, StoreRecord

GEOMETRIC_P = 0.25
MEAN_TYPES = 14
SYNTH_CREATED = "1970-01-01T00:00:00+00:00"

_LEAVES = sorted(LEAF_CATEGORIES)


def path_type_universe() -> list[str]:
    keys = []
    for top in INTERIOR_CATEGORIES:
        for i, a in enumerate(_LEAVES):
            keys.append(PathType(top, (a,)).key)
            for b in _LEAVES[i:]:
                keys.append(PathType(top, (a, b)).key)
    return keys


def _vocabulary(rng: np.random.Generator, size: int) -> list[str]:
    cons = "bcdfghklmnprstvwz"
    vows = "aeiou"
    words = set()
    while len(words) < size:
        n = int(rng.integers(1, 4))
        words.add("".join(cons[rng.integers(len(cons))] + vows[rng.integers(len(vows))] for _ in range(n)))
    return sorted(words)


def _zipf_weights(n: int, s: float, rng: np.random.Generator) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** s
    w = w[rng.permutation(n)]
    return w / w.sum()


def synth_reprs(
    n: int,
    seed: int,
    languages: Sequence[str] = ("java", "csharp"),
    with_text: bool = True,
    p: float = GEOMETRIC_P,
) -> list[ProgramRepr]:
    """``n`` reproducible synthetic representations; languages assigned round-robin.

    Per-type frequencies follow Geometric(``p``) on {1, 2, ...}: mean ``1/p``,
    variance ``(1-p)/p**2``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    universe = path_type_universe()
    type_cdf = np.cumsum(_zipf_weights(len(universe), 0.9, rng))
    vocab = _vocabulary(rng, 3000)
    tok_cdf = np.cumsum(_zipf_weights(len(vocab), 1.0, rng))
    width = max(6, len(str(n - 1)))
    sizes = np.minimum(3 + rng.poisson(MEAN_TYPES - 3, size=n), len(universe))
    out = []
    for i in range(n):
        k = int(sizes[i])
        # weighted sampling without replacement by oversampling and keeping first occurrences
        chosen: list[int] = []
        while len(chosen) < k:
            draw = np.searchsorted(type_cdf, rng.random(2 * k) * type_cdf[-1], side="right")
            for t in draw.tolist():
                if t not in chosen:
                    chosen.append(t)
                    if len(chosen) == k:
                        break
        chosen.sort()
        freqs = rng.geometric(p, size=k).tolist()
        freq = {universe[t]: f for t, f in zip(chosen, freqs)}
        text: dict[str, dict[str, int]] = {}
        if with_text:
            sizes_t = [min(f + 1, 6) for f in freqs]
            toks = np.searchsorted(tok_cdf, rng.random(sum(sizes_t)) * tok_cdf[-1], side="right").tolist()
            pos = 0
            for t, m in zip(chosen, sizes_t):
                bag: dict[str, int] = {}
                for tok in toks[pos : pos + m]:
                    w = vocab[tok]
                    bag[w] = bag.get(w, 0) + 1
                pos += m
                text[universe[t]] = bag
        out.append(ProgramRepr(f"syn{seed}-{i:0{width}d}", languages[i % len(languages)], freq, text))
    return out


def write_store(path: Union[str, os.PathLike], reprs: Sequence[ProgramRepr], locator: str = "synthetic") -> Store:
    """Append ``reprs`` to a new store at ``path`` and reopen it read-only."""
    with Store.open(path, "append", created=SYNTH_CREATED) as store:
        for r in reprs:
            store.append(StoreRecord(r, locator))
    return Store.open(path, "read")


def synth_corpus(path: Union[str, os.PathLike], n: int, seed: int, **kwargs) -> Store:
    return write_store(path, synth_reprs(n, seed, **kwargs))


# -- synthetic Java source ----------------------------------------------------

_TYPES = ["int", "long", "double", "String", "boolean"]
_WORDS = [
    "count", "total", "index", "value", "result", "buffer", "name", "size", "limit", "offset",
    "item", "node", "key", "score", "weight", "sum", "delta", "flag", "text", "width",
    "height", "depth", "step", "rate", "price", "level", "data", "input", "output", "cache",
]
_CALLS = ["compute", "update", "check", "load", "store", "parse", "merge", "scale", "reset", "emit"]
_OPS = ["+", "-", "*", "/", "%"]
_CMP = ["<", ">", "<=", ">=", "==", "!="]


@dataclass
class Stmt:
    kind: str
    parts: list = field(default_factory=list)
    body: list["Stmt"] = field(default_factory=list)
    orelse: list["Stmt"] = field(default_factory=list)


@dataclass
class Method:
    name: str
    ret: str
    params: list[tuple[str, str]]
    body: list[Stmt]


@dataclass
class ClassModel:
    name: str
    methods: list[Method]


def _expr(rng: random.Random, names: list[str], depth: int = 0) -> str:
    r = rng.random()
    if depth > 1 or r < 0.35:
        return rng.choice(names)
    if r < 0.55:
        return str(rng.randint(0, 100))
    if r < 0.85:
        return f"{_expr(rng, names, depth + 1)} {rng.choice(_OPS)} {_expr(rng, names, depth + 1)}"
    return f"{rng.choice(_CALLS)}({_expr(rng, names, depth + 1)})"


def _block(rng: random.Random, names: list[str], depth: int, size: int) -> list[Stmt]:
    stmts = []
    for _ in range(size):
        r = rng.random()
        if r < 0.3:
            name = f"{rng.choice(_WORDS)}{len(names)}"
            stmts.append(Stmt("decl", [rng.choice(_TYPES[:3]), name, _expr(rng, names)]))
            names = names + [name]
        elif r < 0.55:
            stmts.append(Stmt("assign", [rng.choice(names), rng.choice(["=", "+=", "-="]), _expr(rng, names)]))
        elif r < 0.7:
            stmts.append(Stmt("call", [rng.choice(_CALLS), _expr(rng, names)]))
        elif r < 0.85 and depth < 2:
            cond = f"{rng.choice(names)} {rng.choice(_CMP)} {_expr(rng, names, 1)}"
            body = _block(rng, names, depth + 1, rng.randint(1, 3))
            orelse = _block(rng, names, depth + 1, rng.randint(1, 2)) if rng.random() < 0.4 else []
            stmts.append(Stmt("if", [cond], body, orelse))
        elif depth < 2:
            var = f"i{depth}"
            bound = rng.choice(names)
            stmts.append(Stmt("for", [var, bound], _block(rng, names + [var], depth + 1, rng.randint(1, 3))))
        else:
            stmts.append(Stmt("call", [rng.choice(_CALLS), _expr(rng, names)]))
    return stmts


def synth_java_model(seed: int) -> ClassModel:
    rng = random.Random(seed)
    methods = []
    for m in range(rng.randint(1, 3)):
        params = [(rng.choice(_TYPES[:3]), f"{rng.choice(_WORDS)}P{j}") for j in range(rng.randint(1, 3))]
        names = [p[1] for p in params]
        body = _block(rng, names, 0, rng.randint(3, 8))
        body.append(Stmt("return", [_expr(rng, names)]))
        methods.append(Method(f"{rng.choice(_CALLS)}{rng.choice(_WORDS).title()}{m}", "int", params, body))
    return ClassModel(f"Gen{seed}", methods)


def _render_block(stmts: list[Stmt], indent: int) -> list[str]:
    pad = "    " * indent
    out = []
    for s in stmts:
        if s.kind == "decl":
            out.append(f"{pad}{s.parts[0]} {s.parts[1]} = {s.parts[2]};")
        elif s.kind == "assign":
            out.append(f"{pad}{s.parts[0]} {s.parts[1]} {s.parts[2]};")
        elif s.kind == "call":
            out.append(f"{pad}{s.parts[0]}({s.parts[1]});")
        elif s.kind == "return":
            out.append(f"{pad}return {s.parts[0]};")
        elif s.kind == "if":
            out.append(f"{pad}if ({s.parts[0]}) {{")
            out += _render_block(s.body, indent + 1)
            if s.orelse:
                out.append(f"{pad}}} else {{")
                out += _render_block(s.orelse, indent + 1)
            out.append(f"{pad}}}")
        elif s.kind == "for":
            v, bound = s.parts
            out.append(f"{pad}for (int {v} = 0; {v} < {bound}; {v}++) {{")
            out += _render_block(s.body, indent + 1)
            out.append(f"{pad}}}")
    return out


def render_java(model: ClassModel) -> str:
    lines = [f"public class {model.name} {{"]
    for m in model.methods:
        params = ", ".join(f"{t} {n}" for t, n in m.params)
        lines.append(f"    public {m.ret} {m.name}({params}) {{")
        lines += _render_block(m.body, 2)
        lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def synth_java_program(seed: int) -> str:
    return render_java(synth_java_model(seed))


def _rename(text: str, mapping: dict[str, str]) -> str:
    import re

    if not mapping:
        return text
    pattern = re.compile(r"\b(" + "|".join(map(re.escape, sorted(mapping, key=len, reverse=True))) + r")\b")
    return pattern.sub(lambda m: mapping[m.group(1)], text)


def mutate_program(model: ClassModel, seed: int) -> ClassModel:
    """Clone with identifiers renamed and sibling statements reordered."""
    rng = random.Random(seed)
    idents = set()

    def walk(stmts):
        for s in stmts:
            if s.kind == "decl":
                idents.add(s.parts[1])
            walk(s.body)
            walk(s.orelse)

    for m in model.methods:
        idents.update(n for _, n in m.params)
        walk(m.body)
    # swap the word part, keep the numeric suffix so clones read like generated code
    mapping: dict[str, str] = {}
    taken = set(idents)
    for name in sorted(idents):
        stem = name.rstrip("0123456789P")
        suffix = name[len(stem):]
        new = name
        while new in taken:
            new = rng.choice(_WORDS) + suffix
        taken.add(new)
        mapping[name] = new

    def mut(stmts: list[Stmt]) -> list[Stmt]:
        out = [
            Stmt(s.kind, [_rename(p, mapping) for p in s.parts], mut(s.body), mut(s.orelse)) for s in stmts
        ]
        tail = [s for s in out if s.kind == "return"]
        head = [s for s in out if s.kind != "return"]
        rng.shuffle(head)
        return head + tail

    methods = [
        Method(m.name, m.ret, [(t, mapping.get(n, n)) for t, n in m.params], mut(m.body)) for m in model.methods
    ]
    return ClassModel(model.name, methods)
