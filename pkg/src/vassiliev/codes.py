"""Knot diagrams as signed Gauss codes.

A Gauss code records a walk around a knot diagram.  Each crossing is met
twice, once on the over strand and once on the under strand, and both
passages carry the crossing sign, so tokens look like ``O3+`` or
``U12-``.  The first token marks the basepoint; every positional notion
(first visit, rotation) is relative to it.  The empty code is the
unknot.

Singular codes extend the grammar with double points, written ``X3a``
for the first visit to double point 3 and ``X3b`` for the second.

Besides parsing and formatting, this module implements basepoint
rotation, mirror image, orientation reversal, curl and strand-pair
insertions, a planarity test for signed codes, and a reader for knot
tables stored as JSON lines.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    IndexOutOfRange,
    LabelRoleMismatch,
    MalformedToken,
    ParseError,
    SignMismatch,
    UnknownLabel,
    UnsupportedOrientationCase,
    VassilievError,
)

OVER = "O"
UNDER = "U"

_TOKEN = re.compile(r"(O|U)([A-Za-z0-9]+)([+-])\Z")
_SINGULAR_TOKEN = re.compile(r"X([A-Za-z0-9]+)([ab])\Z")


@dataclass(frozen=True)
class Passage:
    """One visit to an ordinary crossing: label, O or U role, sign."""

    label: str
    role: str
    sign: int

    def token(self) -> str:
        return f"{self.role}{self.label}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class DoublePointPassage:
    """One visit to a double point; visit is "a" (first) or "b" (second)."""

    label: str
    visit: str

    def token(self) -> str:
        return f"X{self.label}{self.visit}"


AnyPassage = Union[Passage, DoublePointPassage]


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: a kind tag, the label involved, a message."""

    kind: str
    label: Optional[str]
    message: str


@dataclass(frozen=True)
class GaussCode:
    """An immutable signed Gauss code; passages in basepoint order."""

    passages: tuple[Passage, ...] = ()

    def __len__(self) -> int:
        return len(self.passages)

    def __iter__(self) -> Iterator[Passage]:
        return iter(self.passages)

    @property
    def crossings(self) -> tuple[str, ...]:
        """Crossing labels in order of first appearance."""
        seen: dict[str, None] = {}
        for p in self.passages:
            seen.setdefault(p.label, None)
        return tuple(seen)

    def positions(self, label: str) -> tuple[int, int]:
        """Word positions of the two passages through ``label``, ascending."""
        hits = [i for i, p in enumerate(self.passages) if p.label == label]
        if len(hits) != 2:
            raise UnknownLabel(f"label {label!r} does not occur twice")
        return hits[0], hits[1]

    def sign_of(self, label: str) -> int:
        i, _ = self.positions(label)
        return self.passages[i].sign


@dataclass(frozen=True)
class SingularCode:
    """A Gauss code with double points mixed in."""

    passages: tuple[AnyPassage, ...] = ()

    def __len__(self) -> int:
        return len(self.passages)

    def __iter__(self) -> Iterator[AnyPassage]:
        return iter(self.passages)

    @property
    def double_points(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for p in self.passages:
            if isinstance(p, DoublePointPassage):
                seen.setdefault(p.label, None)
        return tuple(seen)

    @property
    def degree(self) -> int:
        return len(self.double_points)


@dataclass(frozen=True)
class KnotRecord:
    """A named knot with its code and optional expected invariant values."""

    name: str
    code: GaussCode
    expected: Optional[Mapping[str, Fraction]] = None


def _diagnose(passages: Sequence[AnyPassage]) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    ordinary: dict[str, list[Passage]] = {}
    doubles: dict[str, list[tuple[int, DoublePointPassage]]] = {}
    for i, p in enumerate(passages):
        if isinstance(p, Passage):
            ordinary.setdefault(p.label, []).append(p)
        else:
            doubles.setdefault(p.label, []).append((i, p))
    for label, ps in sorted(ordinary.items()):
        roles = sorted(p.role for p in ps)
        if roles != [OVER, UNDER]:
            out.append(
                Diagnostic(
                    "LabelRoleMismatch",
                    label,
                    f"crossing {label} has passages {'/'.join(roles)},"
                    " needs exactly one O and one U",
                )
            )
            continue
        if ps[0].sign != ps[1].sign:
            out.append(
                Diagnostic(
                    "SignMismatch",
                    label,
                    f"crossing {label} carries both signs",
                )
            )
    for label, ps in sorted(doubles.items()):
        visits = [p.visit for _, p in sorted(ps)]
        if visits != ["a", "b"]:
            out.append(
                Diagnostic(
                    "LabelRoleMismatch",
                    label,
                    f"double point {label} needs visit a then visit b,"
                    f" got {'/'.join(visits) or 'nothing'}",
                )
            )
    return out


_DIAG_EXC = {
    "LabelRoleMismatch": LabelRoleMismatch,
    "SignMismatch": SignMismatch,
}


def _raise_first(diags: Sequence[Diagnostic]) -> None:
    if diags:
        d = diags[0]
        raise _DIAG_EXC[d.kind](d.message)


def _normalize_labels(passages: Sequence[AnyPassage]) -> tuple[AnyPassage, ...]:
    # Dense relabeling "1".."n" in order of first appearance, double points
    # numbered in the same shared sequence as crossings never collide since
    # the token kinds differ.
    ordinary: dict[str, str] = {}
    doubles: dict[str, str] = {}
    for p in passages:
        table = ordinary if isinstance(p, Passage) else doubles
        if p.label not in table:
            table[p.label] = str(len(table) + 1)
    out: list[AnyPassage] = []
    for p in passages:
        if isinstance(p, Passage):
            out.append(Passage(ordinary[p.label], p.role, p.sign))
        else:
            out.append(DoublePointPassage(doubles[p.label], p.visit))
    return tuple(out)


def parse_gauss_code(text: str) -> GaussCode:
    """Parse a whitespace-separated token string into a Gauss code.

    Labels are normalized to 1..n in order of first appearance.  Raises
    MalformedToken, LabelRoleMismatch, or SignMismatch on bad input.
    """
    passages: list[Passage] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise MalformedToken(f"bad token {tok!r}")
        role, label, sign = m.groups()
        passages.append(Passage(label, role, 1 if sign == "+" else -1))
    _raise_first(_diagnose(passages))
    return GaussCode(_normalize_labels(passages))


def parse_singular_code(text: str) -> SingularCode:
    """Parse a token string that may contain double point visits Xna/Xnb."""
    passages: list[AnyPassage] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if m:
            role, label, sign = m.groups()
            passages.append(Passage(label, role, 1 if sign == "+" else -1))
            continue
        s = _SINGULAR_TOKEN.match(tok)
        if not s:
            raise MalformedToken(f"bad token {tok!r}")
        passages.append(DoublePointPassage(s.group(1), s.group(2)))
    _raise_first(_diagnose(passages))
    return SingularCode(_normalize_labels(passages))


def format_code(code: Union[GaussCode, SingularCode]) -> str:
    """Render a code back to its token string form."""
    return " ".join(p.token() for p in code.passages)


def validate(code: Union[GaussCode, SingularCode]) -> tuple[Diagnostic, ...]:
    """Structural diagnostics for a possibly hand-built code.

    Empty result means the code is well formed.  Parsing already
    enforces these, so this matters for codes assembled directly.
    """
    out = list(_diagnose(code.passages))
    for p in code.passages:
        if isinstance(p, Passage):
            if p.role not in (OVER, UNDER):
                out.append(Diagnostic("LabelRoleMismatch", p.label, f"bad role {p.role!r}"))
            if p.sign not in (1, -1):
                out.append(Diagnostic("SignMismatch", p.label, f"bad sign {p.sign!r}"))
        elif p.visit not in ("a", "b"):
            out.append(Diagnostic("LabelRoleMismatch", p.label, f"bad visit {p.visit!r}"))
    return tuple(out)


def mirror(code: GaussCode) -> GaussCode:
    """Mirror image: swap over and under at every crossing, negate signs."""
    swapped = tuple(
        Passage(p.label, UNDER if p.role == OVER else OVER, -p.sign)
        for p in code.passages
    )
    return GaussCode(swapped)


def rotate_basepoint(code: GaussCode, k: int) -> GaussCode:
    """Move the basepoint forward by k passages (k may be any integer)."""
    n = len(code.passages)
    if n == 0:
        return code
    k %= n
    return GaussCode(code.passages[k:] + code.passages[:k])


def reverse_orientation(code: GaussCode) -> GaussCode:
    """Traverse the knot the other way; roles and signs are unchanged."""
    return GaussCode(code.passages[::-1])


def _fresh_labels(code: Union[GaussCode, SingularCode], count: int) -> list[str]:
    taken = {p.label for p in code.passages}
    nxt = 1 + max((int(l) for l in taken if l.isdigit()), default=0)
    return [str(nxt + i) for i in range(count)]


def apply_r1(code: GaussCode, position: int, sign: int, first_role: str = OVER) -> GaussCode:
    """Insert a curl at a word position; the knot itself is unchanged.

    The new crossing's two passages are adjacent, with ``first_role``
    met first and both carrying ``sign``.  Any position from 0 to
    len(code) is geometrically valid.
    """
    if not 0 <= position <= len(code.passages):
        raise IndexOutOfRange(f"position {position} not in 0..{len(code.passages)}")
    if sign not in (1, -1):
        raise VassilievError(f"sign must be +1 or -1, got {sign!r}")
    if first_role not in (OVER, UNDER):
        raise VassilievError(f"first_role must be O or U, got {first_role!r}")
    (label,) = _fresh_labels(code, 1)
    second = UNDER if first_role == OVER else OVER
    kink = (Passage(label, first_role, sign), Passage(label, second, sign))
    ps = code.passages
    return GaussCode(ps[:position] + kink + ps[position:])


# --- surface embedding ----------------------------------------------------
#
# A signed code determines a 4-valent graph with a cyclic dart order at
# every vertex, hence a closed oriented surface.  Edge g runs from
# passage g to passage g+1 (cyclically); its forward dart is 2g and its
# backward dart is 2g+1, so opposite darts differ by xor 1.  A dart is
# attached at the vertex it points away from.
#
# Counterclockwise dart order at a vertex, writing o/u for the over and
# under passage and in/out for arriving and leaving darts:
#
#   positive crossing   (o-in, u-in, o-out, u-out)
#   negative crossing   (o-in, u-out, o-out, u-in)
#   double point        (first-in, second-in, first-out, second-out)
#
# Faces are the orbits of (next counterclockwise) after (flip dart); the
# code is realizable in the plane exactly when there are c + 2 of them.


def _rotation_system(code: Union[GaussCode, SingularCode]) -> list[tuple[int, int, int, int]]:
    ps = code.passages
    n = len(ps)
    if n % 2:
        raise VassilievError("odd number of passages")

    def d_in(p: int) -> int:
        return 2 * ((p - 1) % n) + 1

    def d_out(p: int) -> int:
        return 2 * p

    by_label: dict[tuple[type, str], list[int]] = {}
    for i, p in enumerate(ps):
        by_label.setdefault((type(p), p.label), []).append(i)

    rotations = []
    for (kind, label), hits in by_label.items():
        if len(hits) != 2:
            raise UnknownLabel(f"label {label!r} does not occur twice")
        first, second = hits
        if kind is DoublePointPassage:
            rotations.append((d_in(first), d_in(second), d_out(first), d_out(second)))
            continue
        a, b = ps[first], ps[second]
        over, under = (first, second) if a.role == OVER else (second, first)
        if a.sign > 0:
            rotations.append((d_in(over), d_in(under), d_out(over), d_out(under)))
        else:
            rotations.append((d_in(over), d_out(under), d_out(over), d_in(under)))
    return rotations


def _faces(code: Union[GaussCode, SingularCode]) -> list[tuple[int, ...]]:
    """Face boundary walks of the embedded diagram, as dart tuples."""
    n = len(code.passages)
    succ = [0] * (2 * n)
    for rot in _rotation_system(code):
        for i, d in enumerate(rot):
            succ[d] = rot[(i + 1) % 4]
    faces = []
    seen = [False] * (2 * n)
    for start in range(2 * n):
        if seen[start]:
            continue
        walk = []
        d = start
        while not seen[d]:
            seen[d] = True
            walk.append(d)
            d = succ[d ^ 1]
        faces.append(tuple(walk))
    return faces


def embedding_genus(code: Union[GaussCode, SingularCode]) -> int:
    """Genus of the closed surface the signed code embeds in."""
    c = len(code.passages) // 2
    if c == 0:
        return 0
    euler = c - 2 * c + len(_faces(code))
    assert euler % 2 == 0
    return (2 - euler) // 2


def is_realizable(code: Union[GaussCode, SingularCode]) -> bool:
    """True when the signed code is the code of an actual plane diagram."""
    return embedding_genus(code) == 0


def has_even_interlacement(code: GaussCode) -> bool:
    """Necessary planarity condition: every chord meets evenly many others.

    Weaker than is_realizable but independent of it, which makes it a
    useful cross-check.
    """
    spans = [sorted(code.positions(l)) for l in code.crossings]
    for i, (a1, a2) in enumerate(spans):
        count = 0
        for j, (b1, b2) in enumerate(spans):
            if i != j and (a1 < b1 < a2) != (a1 < b2 < a2):
                count += 1
        if count % 2:
            return False
    return True


# Which face-trace direction corresponds to parallel strands for the two
# insertion cases is fixed once by calibration on small realizable codes
# (exhaustive sign search on the trefoil); see tests covering insertion
# validity.  case-1 pairs with backward darts, case-2 with forward ones.
_R2_CASES = {
    "case-1": (1, -1),
    "case-2": (-1, 1),
}


def _insertion_darts(position: int, word_len: int, forward: bool) -> int:
    edge = (position - 1) % word_len
    return 2 * edge if forward else 2 * edge + 1


def apply_r2(code: GaussCode, position_a: int, position_b: int, orientation_case: str) -> GaussCode:
    """Slide one strand across another, adding two cancelling crossings.

    Inserts "O x, O y" at position_a and "U y, U x" at position_b (both
    positions in the original word, 0..len).  Equal positions nest the
    two pairs, and the pair {0, len} wraps them around the basepoint;
    both amount to two curls and are always valid.  Other position pairs
    are valid only when the two word edges border a common face with
    compatible direction: case-1 needs both backward, case-2 both
    forward.  The crossing signs are (+, -) for case-1 and (-, +) for
    case-2.  Anything else raises UnsupportedOrientationCase.
    """
    n = len(code.passages)
    if orientation_case not in _R2_CASES:
        raise UnsupportedOrientationCase(f"unknown case {orientation_case!r}")
    if not 0 <= position_a <= n:
        raise IndexOutOfRange(f"position {position_a} not in 0..{n}")
    if not 0 <= position_b <= n:
        raise IndexOutOfRange(f"position {position_b} not in 0..{n}")
    if position_a > position_b:
        position_a, position_b = position_b, position_a
    sign_x, sign_y = _R2_CASES[orientation_case]

    realizable_input = n > 0 and is_realizable(code)
    degenerate = position_a == position_b or (position_a, position_b) == (0, n)
    if not degenerate and realizable_input:
        forward = orientation_case == "case-2"
        da = _insertion_darts(position_a, n, forward)
        db = _insertion_darts(position_b, n, forward)
        if not any(da in f and db in f for f in _faces(code)):
            raise UnsupportedOrientationCase(
                f"segments before positions {position_a} and {position_b} do not"
                f" border a common face with {orientation_case} orientation"
            )

    x, y = _fresh_labels(code, 2)
    over = (Passage(x, OVER, sign_x), Passage(y, OVER, sign_y))
    under = (Passage(y, UNDER, sign_y), Passage(x, UNDER, sign_x))
    ps = code.passages
    out = GaussCode(
        ps[:position_a] + over + ps[position_a:position_b] + under + ps[position_b:]
    )
    if realizable_input:
        assert is_realizable(out), "insertion broke planarity"
    return out


def list_r2_insertions(code: GaussCode) -> list[tuple[int, int, str]]:
    """All valid (position_a, position_b, case) triples for apply_r2.

    Distinct-position insertions only; equal positions are always
    allowed and not enumerated.  Requires a realizable code.
    """
    n = len(code.passages)
    out = []
    darts_to_position = {}
    for pos in range(1, n + 1):
        # position pos inserts into edge (pos-1); positions 0 and n hit the
        # same edge, keep the smaller
        darts_to_position.setdefault(2 * ((pos - 1) % n), pos)
        darts_to_position.setdefault(2 * ((pos - 1) % n) + 1, pos)
    for face in _faces(code):
        for i, da in enumerate(face):
            for db in face[i + 1:]:
                if da == db or (da >> 1) == (db >> 1):
                    continue
                if da % 2 == 0 and db % 2 == 0:
                    case = "case-2"
                elif da % 2 == 1 and db % 2 == 1:
                    case = "case-1"
                else:
                    continue
                pa, pb = sorted((darts_to_position[da], darts_to_position[db]))
                out.append((pa, pb, case))
    return sorted(set(out))


def random_perturbations(code: GaussCode, count: int, rng) -> list[GaussCode]:
    """Codes of the same knot, each a short chain of curl and slide moves.

    ``rng`` is a random.Random; a fixed seed gives a fixed output list.
    Every result leaves the underlying knot unchanged, so any knot
    invariant must take the same value on all of them.
    """
    out = []
    for _ in range(count):
        current = code
        for _ in range(rng.randint(1, 3)):
            choices = list_r2_insertions(current)
            if choices and rng.random() < 0.5:
                pa, pb, case = rng.choice(choices)
                current = apply_r2(current, pa, pb, case)
            else:
                pos = rng.randint(0, len(current.passages))
                sign = rng.choice((1, -1))
                role = rng.choice((OVER, UNDER))
                current = apply_r1(current, pos, sign, role)
        out.append(current)
    return out


def parse_knot_table(text: str) -> list[KnotRecord]:
    """Parse JSON-lines knot table text.

    Each non-blank line is an object with "name" and "gauss" fields and
    an optional "expected" object mapping invariant names to rational
    strings.  Problems raise ParseError carrying the line number.
    """
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ParseError(lineno, "record is not an object")
        name = obj.get("name")
        gauss = obj.get("gauss")
        if not isinstance(name, str) or not isinstance(gauss, str):
            raise ParseError(lineno, 'need string fields "name" and "gauss"')
        try:
            parsed = parse_gauss_code(gauss)
        except VassilievError as exc:
            raise ParseError(lineno, f"bad code for {name}: {exc}") from exc
        expected = None
        raw = obj.get("expected")
        if raw is not None:
            if not isinstance(raw, dict):
                raise ParseError(lineno, '"expected" is not an object')
            try:
                expected = {k: Fraction(str(v)) for k, v in raw.items()}
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(lineno, f"bad expected value: {exc}") from exc
        records.append(KnotRecord(name, parsed, expected))
    return records


def load_knot_table(path) -> list[KnotRecord]:
    """Read a JSON-lines knot table file; see parse_knot_table."""
    with open(path, encoding="utf-8") as fh:
        return parse_knot_table(fh.read())


def bundled_knot_table() -> list[KnotRecord]:
    """The knot table shipped with the package."""
    from importlib import resources

    text = (resources.files("vassiliev") / "fixtures" / "knots.jsonl").read_text(
        encoding="utf-8"
    )
    return parse_knot_table(text)
