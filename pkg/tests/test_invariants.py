from fractions import Fraction

import pytest

from vassiliev import (
    get_invariant,
    invariant_report,
    mirror,
    parse_gauss_code,
    reverse_orientation,
    rotate_basepoint,
    select_role_convention,
    v2,
    v2_lannes,
    v2_polyak_viro,
    v3,
    v3_lannes,
    v3_polyak_viro,
    v3_theorem,
)
from vassiliev import invariants
from vassiliev.errors import (
    CalibrationUnresolved,
    NonIntegerResult,
    UnknownInvariant,
)
from vassiliev.invariants import REPORT_COLUMNS

from conftest import TREFOIL

ALL_METHODS = (v2_lannes, v2_polyak_viro, v3_lannes, v3_polyak_viro, v3_theorem)


def test_all_methods_vanish_on_unknot():
    empty = parse_gauss_code("")
    for fn in ALL_METHODS:
        assert fn(empty) == 0


def test_all_methods_give_one_on_trefoil(trefoil):
    for fn in ALL_METHODS:
        assert fn(trefoil) == 1


def test_expected_fixture_values(corpus):
    for record in corpus:
        for name, value in (record.expected or {}).items():
            _, fn = get_invariant(name)
            assert fn(record.code) == value, record.name


def test_methods_agree_on_corpus(corpus):
    for record in corpus:
        report = invariant_report(record.code)
        assert report.consistent, record.name


def test_basepoint_rotation_stability(corpus):
    for record in corpus:
        base = {fn: fn(record.code) for fn in ALL_METHODS}
        for k in range(1, len(record.code.passages)):
            rotated = rotate_basepoint(record.code, k)
            for fn in ALL_METHODS:
                assert fn(rotated) == base[fn], (record.name, k)


def test_mirror_behavior(corpus):
    for record in corpus:
        flipped = mirror(record.code)
        assert v2(flipped) == v2(record.code), record.name
        assert v3(flipped) == -v3(record.code), record.name


def test_reversal_leaves_both_invariants(corpus):
    for record in corpus:
        rev = reverse_orientation(record.code)
        assert v2(rev) == v2(record.code)
        assert v3(rev) == v3(record.code)


def test_connected_sum_additivity(corpus):
    values = {r.name: (v2(r.code), v3(r.code)) for r in corpus}
    assert values["granny"] == (2 * values["3_1"][0], 2 * values["3_1"][1])
    assert values["square"][0] == values["3_1"][0] + values["3_1m"][0]
    assert values["square"][1] == values["3_1"][1] + values["3_1m"][1]


def test_report_shape(trefoil):
    report = invariant_report(trefoil)
    assert set(report.values) == set(REPORT_COLUMNS)
    assert report.v2_consistent and report.v3_consistent and report.consistent


def test_half_sum_can_fail_on_virtual_codes():
    virtual = parse_gauss_code("O1+ U2+ U1+ O2+")
    with pytest.raises(NonIntegerResult):
        v2_lannes(virtual)


def test_unknown_invariant_name():
    with pytest.raises(UnknownInvariant):
        get_invariant("v7")


def test_registry_functions_match_canonical(trefoil):
    assert get_invariant("v2")[1](trefoil) == v2(trefoil)
    assert get_invariant("v3")[1](trefoil) == v3(trefoil)
    assert get_invariant("v3_thm")[0] == 3


def test_patterns_dir_override(tmp_path, trefoil):
    (tmp_path / "v2.pat").write_text("2 0 1h 2t 1t 2h\n")
    assert v2_polyak_viro(trefoil, patterns_dir=tmp_path) == 2 * v2(trefoil)


# -- committed calibration choices, locked in place ---------------------------

def test_triple_role_convention_is_first_passage():
    assert invariants.V3_ROLE_CONVENTION == "first-passage"
    assert select_role_convention() == "first-passage"


def test_alternative_role_conventions_fail_calibration(trefoil):
    fig8 = parse_gauss_code("O1+ U2- O4- U1+ O3+ U4- O2- U3+")
    with pytest.raises(NonIntegerResult):
        v3_lannes(trefoil, role_convention="ordered-averaged")
    assert v3_lannes(trefoil, role_convention="ordered-unaveraged") == 2
    assert v3_lannes(fig8, role_convention="ordered-unaveraged") == 1  # wants 0
    with pytest.raises(CalibrationUnresolved):
        v3_lannes(trefoil, role_convention="alphabetical")


def test_sign_constants_are_committed():
    assert invariants.V2_SIGN == -1
    assert invariants.V3_SIGN == -1


def test_flipping_v2_sign_breaks_calibration(monkeypatch, trefoil):
    monkeypatch.setattr(invariants, "V2_SIGN", 1)
    assert v2_lannes(trefoil) == -1  # calibration wants +1


def test_flipping_v3_sign_breaks_calibration(monkeypatch, trefoil):
    monkeypatch.setattr(invariants, "V3_SIGN", 1)
    assert v3_lannes(trefoil) == -1  # calibration wants +1


def test_committed_signs_reproduce_calibration_and_agreement(trefoil, corpus):
    assert v2_lannes(trefoil) == 1 and v3_lannes(trefoil) == 1
    for record in corpus:
        assert invariant_report(record.code).consistent
