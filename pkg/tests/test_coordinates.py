import random

import pytest

from vassiliev import (
    CrossingCoordinates,
    coordinate_table,
    delta,
    epsilon,
    mirror,
    parse_gauss_code,
    rotate_basepoint,
)
from vassiliev.errors import UnknownLabel

from test_codes import random_code


def test_trefoil_table(trefoil):
    assert coordinate_table(trefoil) == (
        CrossingCoordinates("1", 1, 1),
        CrossingCoordinates("2", 0, 1),
        CrossingCoordinates("3", 1, 1),
    )


def test_delta_marks_first_passage_role(trefoil):
    assert delta(trefoil, "1") == 1
    assert delta(trefoil, "2") == 0
    assert epsilon(trefoil, "3") == 1


def test_unknown_label(trefoil):
    with pytest.raises(UnknownLabel):
        delta(trefoil, "7")
    with pytest.raises(UnknownLabel):
        epsilon(trefoil, "0")


def test_empty_code_has_empty_table():
    assert coordinate_table(parse_gauss_code("")) == ()


def test_mirror_flips_delta_and_epsilon(trefoil):
    for entry in coordinate_table(mirror(trefoil)):
        assert entry.epsilon == -1
    assert delta(mirror(trefoil), "1") == 0
    assert delta(mirror(trefoil), "2") == 1


def test_rotation_past_one_passage_flips_its_delta():
    rng = random.Random(5)
    for _ in range(50):
        code = random_code(rng)
        for label in code.crossings:
            first, _ = code.positions(label)
            rotated = rotate_basepoint(code, first + 1)
            assert delta(rotated, label) == 1 - delta(code, label)
            assert epsilon(rotated, label) == epsilon(code, label)
