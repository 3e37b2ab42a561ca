"""Expansion identities: a knot written as an invariant-weighted sum of
basis knots, checked numerically and solved for basis values.

Expansion files are JSON documents:

    {"degree": 3,
     "terms": [{"coeff": {"v3": "1"}, "knot": "3_1"},
               {"coeff": {"v3": "1", "v2": "-1"}, "knot": "4_1"}]}

Each term's coefficient is a rational linear form in invariant names,
evaluated on the knot being expanded; "knot" names a basis knot in the
corpus the checker runs against.
"""

from __future__ import annotations

import inspect
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

from .codes import GaussCode, KnotRecord
from .errors import (
    DegreeTooHigh,
    ParseError,
    UnderdeterminedSystem,
    UnknownInvariant,
    VassilievError,
)
from .invariants import INVARIANTS


@dataclass(frozen=True)
class ExpansionTerm:
    coeff: Mapping[str, Fraction]
    knot: str


@dataclass(frozen=True)
class Expansion:
    degree: int
    terms: Tuple[ExpansionTerm, ...]


@dataclass(frozen=True)
class Probe:
    """A named invariant evaluator with its degree."""

    name: str
    degree: int
    fn: Callable[[GaussCode], int]


@dataclass(frozen=True)
class ResidualRow:
    probe: str
    knot: str
    residual: Fraction


@dataclass(frozen=True)
class ExpansionReport:
    rows: Tuple[ResidualRow, ...]

    @property
    def all_zero(self) -> bool:
        return all(row.residual == 0 for row in self.rows)


@dataclass(frozen=True)
class SolvedProbe:
    probe: str
    values: Mapping[str, Fraction]
    consistent: bool
    certificate: Optional[str]


@dataclass(frozen=True)
class SolveReport:
    probes: Tuple[SolvedProbe, ...]

    @property
    def consistent(self) -> bool:
        return all(p.consistent for p in self.probes)


def parse_expansion(text: str) -> Expansion:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(data, dict):
        raise VassilievError("expansion document must be a JSON object")
    degree = data.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise VassilievError(f"expansion degree must be a positive integer, got {degree!r}")
    raw_terms = data.get("terms")
    if not isinstance(raw_terms, list):
        raise VassilievError("expansion document needs a 'terms' list")
    terms = []
    for k, item in enumerate(raw_terms):
        if not isinstance(item, dict):
            raise VassilievError(f"term {k} is not an object")
        knot = item.get("knot")
        if not isinstance(knot, str) or not knot:
            raise VassilievError(f"term {k} needs a nonempty 'knot' name")
        raw_coeff = item.get("coeff")
        if not isinstance(raw_coeff, dict) or not raw_coeff:
            raise VassilievError(f"term {k} needs a nonempty 'coeff' object")
        coeff: Dict[str, Fraction] = {}
        for name, weight in raw_coeff.items():
            try:
                coeff[name] = Fraction(weight)
            except (ValueError, ZeroDivisionError, TypeError) as exc:
                raise VassilievError(
                    f"term {k}: bad weight {weight!r} for {name!r}: {exc}"
                ) from exc
        terms.append(ExpansionTerm(coeff, knot))
    return Expansion(degree, tuple(terms))


def load_expansion(path) -> Expansion:
    with open(path, encoding="utf-8") as fh:
        return parse_expansion(fh.read())


def bundled_expansion(degree: int) -> Expansion:
    """The packaged expansion of the given degree (2 or 3)."""
    from importlib import resources

    entry = resources.files("vassiliev") / "expansions" / f"n{degree}.json"
    try:
        text = entry.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise VassilievError(f"no bundled expansion of degree {degree}") from exc
    return parse_expansion(text)


def probes_from_names(names: Sequence[str], patterns_dir=None) -> list[Probe]:
    probes = []
    for name in names:
        entry = INVARIANTS.get(name)
        if entry is None:
            raise UnknownInvariant(f"unknown invariant {name!r}")
        degree, fn = entry
        if patterns_dir is not None and "patterns_dir" in inspect.signature(fn).parameters:
            fn = partial(fn, patterns_dir=patterns_dir)
        probes.append(Probe(name, degree, fn))
    return probes


def _coefficient_evaluators(
    expansion: Expansion, evaluators: Optional[Mapping[str, Callable]]
) -> Dict[str, Callable[[GaussCode], int]]:
    table: Dict[str, Callable[[GaussCode], int]] = {}
    for term in expansion.terms:
        for name in term.coeff:
            if name in table:
                continue
            if evaluators is not None and name in evaluators:
                table[name] = evaluators[name]
            elif name in INVARIANTS:
                table[name] = INVARIANTS[name][1]
            else:
                raise UnknownInvariant(f"no evaluator for invariant {name!r}")
    return table


def _basis_records(expansion: Expansion, corpus: Sequence[KnotRecord]) -> list[KnotRecord]:
    by_name = {record.name: record for record in corpus}
    found = []
    for term in expansion.terms:
        record = by_name.get(term.knot)
        if record is None:
            raise VassilievError(f"basis knot {term.knot!r} not in the corpus")
        found.append(record)
    return found


def _term_weights(
    expansion: Expansion,
    code: GaussCode,
    table: Mapping[str, Callable[[GaussCode], int]],
) -> list[Fraction]:
    """Evaluate every term's coefficient linear form on one knot."""
    cache: Dict[str, Fraction] = {}
    out = []
    for term in expansion.terms:
        total = Fraction(0)
        for name, weight in term.coeff.items():
            if name not in cache:
                cache[name] = Fraction(table[name](code))
            total += weight * cache[name]
        out.append(total)
    return out


def check_expansion(
    expansion: Expansion,
    probes: Sequence[Probe],
    corpus: Sequence[KnotRecord],
    evaluators: Optional[Mapping[str, Callable]] = None,
    basis_values: Optional[Mapping[Tuple[str, str], Fraction]] = None,
) -> ExpansionReport:
    """Residuals probe(K) - sum of coeff(K) * probe(basis knot) over the corpus.

    With ``basis_values`` given, probe values on basis knots are taken
    from that (probe name, knot name) table instead of being computed.
    """
    for probe in probes:
        if probe.degree > expansion.degree:
            raise DegreeTooHigh(
                f"probe {probe.name} has degree {probe.degree}, "
                f"expansion only claims degree {expansion.degree}"
            )
    table = _coefficient_evaluators(expansion, evaluators)
    basis = _basis_records(expansion, corpus)
    rows = []
    for probe in probes:
        if basis_values is None:
            on_basis = [Fraction(probe.fn(record.code)) for record in basis]
        else:
            on_basis = [basis_values[(probe.name, record.name)] for record in basis]
        for record in corpus:
            weights = _term_weights(expansion, record.code, table)
            predicted = sum(
                (w * value for w, value in zip(weights, on_basis)), Fraction(0)
            )
            residual = Fraction(probe.fn(record.code)) - predicted
            rows.append(ResidualRow(probe.name, record.name, residual))
    return ExpansionReport(tuple(rows))


def _eliminate(rows: list[list[Fraction]], unknowns: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [list(row) for row in rows]
    pivot_cols = []
    rank = 0
    for col in range(unknowns):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        head = mat[rank][col]
        mat[rank] = [x / head for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                factor = mat[i][col]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[rank])]
        pivot_cols.append(col)
        rank += 1
    return mat, pivot_cols


def solve_basis_values(
    expansion: Expansion,
    probes: Sequence[Probe],
    corpus: Sequence[KnotRecord],
    evaluators: Optional[Mapping[str, Callable]] = None,
) -> SolveReport:
    """Fit probe values on the basis knots from the corpus equations.

    One exact linear solve per probe.  An unsolvable system is reported
    with a certificate naming the corpus combination that forces a
    contradiction; a rank-deficient one raises UnderdeterminedSystem.
    """
    for probe in probes:
        if probe.degree > expansion.degree:
            raise DegreeTooHigh(
                f"probe {probe.name} has degree {probe.degree}, "
                f"expansion only claims degree {expansion.degree}"
            )
    t = len(expansion.terms)
    if len(corpus) <= t:
        raise UnderdeterminedSystem(
            f"corpus of {len(corpus)} knots cannot pin down {t} basis values"
        )
    table = _coefficient_evaluators(expansion, evaluators)
    weight_rows = [_term_weights(expansion, record.code, table) for record in corpus]
    knot_names = [record.name for record in corpus]
    solved = []
    for probe in probes:
        # columns: t unknowns, rhs, then one tracking column per corpus row
        rows = []
        for k, record in enumerate(corpus):
            tracking = [Fraction(int(j == k)) for j in range(len(corpus))]
            rows.append(weight_rows[k] + [Fraction(probe.fn(record.code))] + tracking)
        mat, pivot_cols = _eliminate(rows, t)
        certificate = None
        for row in mat:
            if all(x == 0 for x in row[:t]) and row[t] != 0:
                mults = {
                    knot_names[j]: row[t + 1 + j]
                    for j in range(len(corpus))
                    if row[t + 1 + j] != 0
                }
                combo = " + ".join(f"({mult})*[{name}]" for name, mult in mults.items())
                certificate = f"{combo} forces 0 = {row[t]}"
                break
        if certificate is not None:
            solved.append(SolvedProbe(probe.name, {}, False, certificate))
            continue
        if len(pivot_cols) < t:
            raise UnderdeterminedSystem(
                f"probe {probe.name}: corpus determines only "
                f"{len(pivot_cols)} of {t} basis values"
            )
        values = {}
        for rank, col in enumerate(pivot_cols):
            values[expansion.terms[col].knot] = mat[rank][t]
        solved.append(SolvedProbe(probe.name, values, True, None))
    return SolveReport(tuple(solved))
