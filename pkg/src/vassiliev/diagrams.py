"""Arrow diagrams, chord diagrams, and subdiagram counting.

The arrow diagram of a Gauss code has one arrow per crossing drawn on
the base circle, pointing from the over passage to the under passage
and carrying the crossing sign.  Forgetting directions and signs leaves
the chord diagram.  Counting signed copies of small fixed patterns
inside the arrow diagram of a code is the engine behind the pattern
based invariant evaluators.

Pattern files hold one term per line, ``<coeff> <bracket> <word>``:
coeff is a rational like ``1`` or ``-1/2``; bracket is ``0`` for a
based pattern or ``1`` to sum the pattern's distinct basepoint
rotations; the word lists arrow endpoints in circle order, ``1h`` for
the head of arrow 1 and ``1t`` for its tail, e.g. ``1h 2t 1t 2h``.
``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .codes import GaussCode, OVER, SingularCode
from .errors import (
    IndexOutOfRange,
    MalformedToken,
    ParseError,
    SameChord,
    UnbalancedLabel,
)

_ENDPOINT = re.compile(r"([A-Za-z0-9]+)([ht])\Z")


@dataclass(frozen=True)
class Arrow:
    """A directed signed chord: tail at the over passage, head under."""

    tail: int
    head: int
    sign: int


def _check_positions(pairs: Iterable[tuple[int, int]]) -> None:
    flat = [p for pair in pairs for p in pair]
    if sorted(flat) != list(range(len(flat))):
        raise UnbalancedLabel(
            f"endpoint positions {sorted(flat)} must be exactly 0..{len(flat) - 1}"
        )


@dataclass(frozen=True)
class ArrowDiagram:
    """Arrows on 2n based circle positions, every position used once."""

    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        _check_positions((a.tail, a.head) for a in self.arrows)
        object.__setattr__(
            self, "arrows", tuple(sorted(self.arrows, key=lambda a: min(a.tail, a.head)))
        )

    @property
    def degree(self) -> int:
        return len(self.arrows)


@dataclass(frozen=True)
class Pattern:
    """An arrow diagram with no signs, used as a thing to count."""

    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_positions(self.arrows)
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows, key=min)))

    @property
    def degree(self) -> int:
        return len(self.arrows)

    def word(self) -> str:
        """Canonical endpoint word, labels by first appearance."""
        at: dict[int, tuple[int, str]] = {}
        for i, (t, h) in enumerate(self.arrows):
            at[t] = (i, "t")
            at[h] = (i, "h")
        order: dict[int, int] = {}
        toks = []
        for pos in range(2 * len(self.arrows)):
            idx, kind = at[pos]
            rank = order.setdefault(idx, len(order) + 1)
            toks.append(f"{rank}{kind}")
        return " ".join(toks)

    def rotate(self, k: int) -> "Pattern":
        """Move the basepoint forward past k endpoints."""
        n = 2 * len(self.arrows)
        if n == 0:
            return self
        return Pattern(tuple(((t - k) % n, (h - k) % n) for t, h in self.arrows))

    def distinct_rotations(self) -> tuple["Pattern", ...]:
        """One representative per distinct based rotation of this pattern."""
        seen: dict[str, Pattern] = {}
        for k in range(max(1, 2 * len(self.arrows))):
            p = self.rotate(k)
            seen.setdefault(p.word(), p)
        return tuple(seen.values())


@dataclass(frozen=True)
class ChordDiagram:
    """Unordered chords on 2n based circle positions."""

    chords: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_positions(self.chords)
        object.__setattr__(
            self,
            "chords",
            tuple(sorted(tuple(sorted(c)) for c in self.chords)),
        )

    @property
    def degree(self) -> int:
        return len(self.chords)


def arrow_diagram_from_code(code: Union[GaussCode, SingularCode]) -> ArrowDiagram:
    """Arrow diagram of a code; double points become sign +1 arrows
    pointing from the first visit."""
    first: dict[tuple[type, str], int] = {}
    arrows = []
    for pos, p in enumerate(code.passages):
        key = (type(p), p.label)
        if key not in first:
            first[key] = pos
            continue
        q = first.pop(key)
        if hasattr(p, "role"):
            over, under = (q, pos) if code.passages[q].role == OVER else (pos, q)
            arrows.append(Arrow(over, under, p.sign))
        else:
            arrows.append(Arrow(q, pos, 1))
    if first:
        label = next(iter(first))[1]
        raise UnbalancedLabel(f"label {label!r} occurs once")
    return ArrowDiagram(tuple(arrows))


def chord_diagram(source: Union[GaussCode, SingularCode, ArrowDiagram]) -> ChordDiagram:
    """Forget arrow directions and signs."""
    if not isinstance(source, ArrowDiagram):
        source = arrow_diagram_from_code(source)
    return ChordDiagram(tuple((a.tail, a.head) for a in source.arrows))


def double_point_diagram(code: SingularCode) -> ChordDiagram:
    """Chord diagram of the double points alone, ordinary crossings
    ignored, positions packed in traversal order."""
    firsts: dict[str, int] = {}
    spans = []
    rank = 0
    for p in code.passages:
        if not hasattr(p, "visit"):
            continue
        if p.label in firsts:
            spans.append((firsts[p.label], rank))
        else:
            firsts[p.label] = rank
        rank += 1
    return ChordDiagram(tuple(spans))


def chord_subdiagram(code: GaussCode, labels: Sequence[str]) -> ChordDiagram:
    """Chord diagram spanned by the chosen crossings, positions packed."""
    spans = [code.positions(l) for l in labels]
    rank = {p: i for i, p in enumerate(sorted(p for s in spans for p in s))}
    return ChordDiagram(tuple((rank[a], rank[b]) for a, b in spans))


def interleaved(diagram: ChordDiagram, i: int, j: int) -> bool:
    """Do chords i and j cross when drawn inside the circle?"""
    n = diagram.degree
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRange(f"chord index out of range for {n} chords")
    if i == j:
        raise SameChord(f"chord {i} against itself")
    a1, a2 = diagram.chords[i]
    b1, b2 = diagram.chords[j]
    return (a1 < b1 < a2) != (a1 < b2 < a2)


def parse_pattern(text: str) -> Pattern:
    """Parse an endpoint word like ``1h 2t 1t 2h`` into a pattern."""
    toks = text.split()
    if not toks:
        raise MalformedToken("empty pattern word")
    ends: dict[str, dict[str, int]] = {}
    for pos, tok in enumerate(toks):
        m = _ENDPOINT.match(tok)
        if not m:
            raise MalformedToken(f"bad endpoint {tok!r}")
        label, kind = m.groups()
        slot = ends.setdefault(label, {})
        if kind in slot:
            raise UnbalancedLabel(f"arrow {label} has two {kind} endpoints")
        slot[kind] = pos
    arrows = []
    for label, slot in ends.items():
        if set(slot) != {"t", "h"}:
            raise UnbalancedLabel(f"arrow {label} needs one tail and one head")
        arrows.append((slot["t"], slot["h"]))
    return Pattern(tuple(arrows))


def count_matches(pattern: Pattern, diagram: ArrowDiagram) -> int:
    """Signed number of copies of the based pattern inside the diagram.

    A copy is a subset of the diagram's arrows whose endpoint word,
    read from the basepoint, equals the pattern's word with directions
    respected.  Each copy contributes the product of its arrow signs.
    """
    k = pattern.degree
    if k == 0:
        return 1
    if k > diagram.degree:
        return 0
    pat_at: dict[int, tuple[int, str]] = {}
    for a, (t, h) in enumerate(pattern.arrows):
        pat_at[t] = (a, "t")
        pat_at[h] = (a, "h")
    size = 2 * diagram.degree
    dia_at: list[tuple[int, str]] = [(-1, "")] * size
    for d, arrow in enumerate(diagram.arrows):
        dia_at[arrow.tail] = (d, "t")
        dia_at[arrow.head] = (d, "h")

    total = 0
    assign: dict[int, int] = {}
    used = [False] * diagram.degree

    def walk(i: int, q0: int, sign: int) -> None:
        nonlocal total
        if i == 2 * k:
            total += sign
            return
        a, kind = pat_at[i]
        if a in assign:
            arrow = diagram.arrows[assign[a]]
            q = arrow.tail if kind == "t" else arrow.head
            if q >= q0:
                walk(i + 1, q + 1, sign)
            return
        for q in range(q0, size - (2 * k - i) + 1):
            d, dkind = dia_at[q]
            if used[d] or dkind != kind:
                continue
            arrow = diagram.arrows[d]
            if max(arrow.tail, arrow.head) == q:
                continue
            assign[a] = d
            used[d] = True
            walk(i + 1, q + 1, sign * arrow.sign)
            del assign[a]
            used[d] = False

    walk(0, 0, 1)
    return total


@dataclass(frozen=True)
class PatternTerm:
    coeff: Fraction
    bracket: bool
    pattern: Pattern


@dataclass(frozen=True)
class PatternExpression:
    """A rational combination of (possibly rotation-summed) patterns."""

    terms: tuple[PatternTerm, ...]

    @property
    def degree(self) -> int:
        return max((t.pattern.degree for t in self.terms), default=0)


def evaluate_expression(
    expr: PatternExpression, target: Union[GaussCode, ArrowDiagram]
) -> Fraction:
    """Sum of coeff times pattern count over the expression's terms.

    A bracketed term counts every distinct basepoint rotation of its
    pattern, which makes the term's value independent of where the
    target code is based.
    """
    if not isinstance(target, ArrowDiagram):
        target = arrow_diagram_from_code(target)
    total = Fraction(0)
    for term in expr.terms:
        pats = term.pattern.distinct_rotations() if term.bracket else (term.pattern,)
        total += term.coeff * sum(count_matches(p, target) for p in pats)
    return total


def parse_pattern_file(text: str) -> PatternExpression:
    """Parse pattern file text; see the module docstring for the format."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 2)
        if len(fields) < 3:
            raise ParseError(lineno, "need <coeff> <bracket> <word>")
        coeff_s, bracket_s, word = fields
        try:
            coeff = Fraction(coeff_s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(lineno, f"bad coefficient {coeff_s!r}") from exc
        if bracket_s not in ("0", "1"):
            raise ParseError(lineno, f"bracket flag must be 0 or 1, got {bracket_s!r}")
        try:
            pattern = parse_pattern(word)
        except (MalformedToken, UnbalancedLabel) as exc:
            raise ParseError(lineno, str(exc)) from exc
        terms.append(PatternTerm(coeff, bracket_s == "1", pattern))
    if not terms:
        raise ParseError(1, "pattern file has no terms")
    return PatternExpression(tuple(terms))


def load_pattern_file(path) -> PatternExpression:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern_file(fh.read())
