import random

import pytest
from hypothesis import given, strategies as st

from vassiliev import (
    GaussCode,
    Passage,
    apply_r1,
    apply_r2,
    embedding_genus,
    format_code,
    is_realizable,
    list_r2_insertions,
    mirror,
    parse_gauss_code,
    parse_knot_table,
    parse_singular_code,
    random_perturbations,
    reverse_orientation,
    rotate_basepoint,
    validate,
)
from vassiliev.codes import has_even_interlacement
from vassiliev.errors import (
    IndexOutOfRange,
    LabelRoleMismatch,
    MalformedToken,
    ParseError,
    SignMismatch,
    UnknownLabel,
    UnsupportedOrientationCase,
    VassilievError,
)
from vassiliev.invariants import v2, v3

from conftest import TREFOIL

ABAB = "O1+ U2+ U1+ O2+"  # one interleaved pair; no planar diagram has this code


def random_code(rng, max_crossings=6):
    """A uniformly scrambled valid code, possibly non-realizable."""
    n = rng.randint(0, max_crossings)
    slots = list(range(2 * n))
    rng.shuffle(slots)
    passages = [None] * (2 * n)
    for label in range(1, n + 1):
        a, b = slots[2 * label - 2], slots[2 * label - 1]
        sign = rng.choice((1, -1))
        first_over = rng.random() < 0.5
        passages[min(a, b)] = Passage(str(label), "O" if first_over else "U", sign)
        passages[max(a, b)] = Passage(str(label), "U" if first_over else "O", sign)
    return GaussCode(tuple(passages))


# -- parsing ----------------------------------------------------------------

def test_parse_trefoil_structure(trefoil):
    assert len(trefoil) == 6
    assert trefoil.crossings == ("1", "2", "3")
    assert trefoil.positions("1") == (0, 3)
    assert trefoil.sign_of("2") == 1


def test_parse_empty_is_unknot():
    code = parse_gauss_code("")
    assert len(code) == 0
    assert format_code(code) == ""


def test_parse_normalizes_labels():
    code = parse_gauss_code("Ox- Uzz+ Ux- Ozz+")
    assert code.crossings == ("1", "2")
    assert format_code(code) == "O1- U2+ U1- O2+"


def test_parse_rejects_malformed_tokens():
    for bad in ("O1", "1+", "Q1+", "O1*", "garbage"):
        with pytest.raises(MalformedToken):
            parse_gauss_code(bad)


def test_parse_rejects_role_mismatch():
    with pytest.raises(LabelRoleMismatch):
        parse_gauss_code("O1+ O1+")
    with pytest.raises(LabelRoleMismatch):
        parse_gauss_code("O1+ U2+ O2- U2+ O1+")


def test_parse_rejects_sign_mismatch():
    with pytest.raises(SignMismatch):
        parse_gauss_code("O1+ U1-")


def test_positions_unknown_label(trefoil):
    with pytest.raises(UnknownLabel):
        trefoil.positions("9")


def test_parse_singular_tokens():
    code = parse_singular_code("X9a O2+ X9b U2+")
    assert code.double_points == ("1",)
    assert code.degree == 1
    # crossings and double points each get their own dense numbering
    assert format_code(code) == "X1a O1+ X1b U1+"


def test_singular_visit_order_enforced():
    with pytest.raises(LabelRoleMismatch):
        parse_singular_code("X1b X1a")


def test_validate_reports_instead_of_raising():
    bad = GaussCode((Passage("1", "O", 1), Passage("1", "U", -1),
                     Passage("2", "O", 1), Passage("2", "U", 1)))
    diags = validate(bad)
    assert [d.kind for d in diags] == ["SignMismatch"]
    assert diags[0].label == "1"


def test_roundtrip_fixed_codes(corpus):
    for record in corpus:
        assert parse_gauss_code(format_code(record.code)) == record.code


@given(st.integers(0, 10 ** 6))
def test_roundtrip_random_codes(seed):
    # parse normalizes labels, so round-trip on the normalized form
    normalized = parse_gauss_code(format_code(random_code(random.Random(seed))))
    assert parse_gauss_code(format_code(normalized)) == normalized


# -- symmetries -------------------------------------------------------------

def test_mirror_swaps_roles_and_signs(trefoil):
    assert format_code(mirror(trefoil)) == "U1- O2- U3- O1- U2- O3-"


@given(st.integers(0, 10 ** 6))
def test_mirror_is_an_involution(seed):
    code = random_code(random.Random(seed))
    assert mirror(mirror(code)) == code


@given(st.integers(0, 10 ** 6))
def test_reverse_is_an_involution(seed):
    code = random_code(random.Random(seed))
    assert reverse_orientation(reverse_orientation(code)) == code


def test_rotate_basepoint_composes(trefoil):
    assert rotate_basepoint(trefoil, 6) == trefoil
    assert rotate_basepoint(rotate_basepoint(trefoil, 2), 4) == trefoil
    assert format_code(rotate_basepoint(trefoil, 1)) == "U2+ O3+ U1+ O2+ U3+ O1+"


# -- Reidemeister moves -----------------------------------------------------

def test_r1_on_empty_code():
    out = apply_r1(parse_gauss_code(""), 0, 1, "O")
    assert format_code(out) == "O1+ U1+"
    assert v2(out) == 0 and v3(out) == 0


def test_r1_every_position_keeps_invariants(trefoil):
    for pos in range(len(trefoil) + 1):
        for sign in (1, -1):
            for role in ("O", "U"):
                out = apply_r1(trefoil, pos, sign, role)
                assert not validate(out)
                assert is_realizable(out)
                assert v2(out) == 1 and v3(out) == 1


def test_r1_bad_position(trefoil):
    with pytest.raises(IndexOutOfRange):
        apply_r1(trefoil, 7, 1)


def test_r2_on_empty_code():
    out = apply_r2(parse_gauss_code(""), 0, 0, "case-1")
    assert len(out.crossings) == 2
    assert not validate(out)
    assert {p.sign for p in out.passages} == {1, -1}
    assert v2(out) == 0


def test_r2_unknown_case(trefoil):
    with pytest.raises(UnsupportedOrientationCase):
        apply_r2(trefoil, 0, 0, "case-3")


def test_r2_bad_position(trefoil):
    with pytest.raises(IndexOutOfRange):
        apply_r2(trefoil, 0, 9, "case-1")


def test_r2_equal_positions_always_valid(trefoil):
    for pos in range(len(trefoil) + 1):
        for case in ("case-1", "case-2"):
            out = apply_r2(trefoil, pos, pos, case)
            assert is_realizable(out)
            assert v2(out) == 1 and v3(out) == 1


def test_r2_wrap_pair_always_valid(trefoil):
    for case in ("case-1", "case-2"):
        out = apply_r2(trefoil, 0, len(trefoil), case)
        assert is_realizable(out)
        assert v2(out) == 1


def test_r2_enumerated_insertions_stay_planar(corpus):
    for record in corpus:
        if not record.code.passages:
            continue
        found = list_r2_insertions(record.code)
        assert found, record.name
        for pa, pb, case in found:
            out = apply_r2(record.code, pa, pb, case)
            assert is_realizable(out)
            assert not validate(out)


def test_r2_rejects_face_incompatible_insertion(trefoil):
    # distinct non-wrap pairs valid in one orientation case only
    allowed = set(list_r2_insertions(trefoil))
    n = len(trefoil)
    rejected = 0
    for pa in range(1, n):
        for pb in range(pa + 1, n):
            for case in ("case-1", "case-2"):
                if (pa, pb, case) in allowed:
                    continue
                with pytest.raises(UnsupportedOrientationCase):
                    apply_r2(trefoil, pa, pb, case)
                rejected += 1
    assert rejected > 0


def test_r2_insertions_on_virtual_code_not_checked():
    # non-realizable inputs get the raw insertion, no face test
    virtual = parse_gauss_code(ABAB)
    out = apply_r2(virtual, 1, 3, "case-1")
    assert not validate(out)
    assert len(out.crossings) == 4


def test_random_perturbations_deterministic(trefoil):
    a = random_perturbations(trefoil, 8, random.Random(3))
    b = random_perturbations(trefoil, 8, random.Random(3))
    assert [format_code(x) for x in a] == [format_code(x) for x in b]
    for out in a:
        assert not validate(out)
        assert is_realizable(out)


# -- planarity oracle -------------------------------------------------------

def test_genus_of_known_codes(trefoil):
    assert embedding_genus(trefoil) == 0
    assert embedding_genus(parse_gauss_code("O1+ U1+")) == 0
    assert embedding_genus(parse_gauss_code(ABAB)) == 1
    assert embedding_genus(parse_singular_code("X1a X2a X1b X2b")) == 1


def test_realizability_of_fixtures_and_controls(corpus):
    for record in corpus:
        assert is_realizable(record.code), record.name
    assert not is_realizable(parse_gauss_code(ABAB))


def test_even_interlacement_matches_genus_criterion():
    rng = random.Random(11)
    for _ in range(300):
        code = random_code(rng)
        if not has_even_interlacement(code):
            assert not is_realizable(code)


# -- knot table -------------------------------------------------------------

def test_parse_knot_table_happy_path():
    text = '{"name": "k", "gauss": "O1+ U1+"}\n\n{"name": "u", "gauss": ""}\n'
    records = parse_knot_table(text)
    assert [r.name for r in records] == ["k", "u"]
    assert records[0].expected is None


def test_parse_knot_table_empty():
    assert parse_knot_table("") == []


def test_parse_knot_table_error_lines():
    with pytest.raises(ParseError) as err:
        parse_knot_table('{"name": "k", "gauss": ""}\nnot json\n')
    assert err.value.line == 2
    with pytest.raises(ParseError) as err:
        parse_knot_table('{"name": "k", "gauss": "O1+ O1+"}\n')
    assert err.value.line == 1
    with pytest.raises(ParseError) as err:
        parse_knot_table('{"gauss": ""}\n')
    assert err.value.line == 1
    with pytest.raises(ParseError) as err:
        parse_knot_table('{"name": "k", "gauss": "", "expected": {"v2": "x"}}\n')
    assert err.value.line == 1


def test_bundled_table_contents(corpus):
    names = [r.name for r in corpus]
    assert len(names) >= 6
    for needed in ("unknot", "3_1", "3_1m", "4_1", "5_1", "5_2"):
        assert needed in names
    for record in corpus:
        assert not validate(record.code)
