"""Braid-closure Gauss codes, used to derive the bundled fixtures.

A braid word is a list of nonzero ints; letter e crosses the strands at
positions |e| and |e|+1, and for positive e the strand arriving at
position |e| passes over.  The closure is read by walking each strand
down the braid and wrapping bottom to top; the passages met along the
way, in order, are the Gauss code of the closure.

Convention check: [1, 1, 1] on 2 strands yields exactly
"O1+ U2+ O3+ U1+ O2+ U3+", the standard right-trefoil code.
"""

from __future__ import annotations

from vassiliev.codes import GaussCode, Passage, OVER, UNDER, parse_gauss_code


def strand_count(word: list[int]) -> int:
    return max(abs(e) for e in word) + 1 if word else 1


def closure_permutation(word: list[int]) -> list[int]:
    k = strand_count(word)
    perm = list(range(k))
    for e in word:
        q = abs(e) - 1
        perm[q], perm[q + 1] = perm[q + 1], perm[q]
    return perm


def is_knot(word: list[int]) -> bool:
    """True when the closure has a single component."""
    perm = closure_permutation(word)
    seen = {0}
    at = perm[0]
    while at not in seen:
        seen.add(at)
        at = perm[at]
    return len(seen) == len(perm)


def braid_closure(word: list[int]) -> GaussCode:
    if not is_knot(word):
        raise ValueError("closure has more than one component")
    passages = []
    pos = 0
    start = True
    while start or pos != 0:
        start = False
        for i, e in enumerate(word):
            q = abs(e) - 1
            sign = 1 if e > 0 else -1
            if pos == q:
                role = OVER if e > 0 else UNDER
                passages.append(Passage(str(i + 1), role, sign))
                pos = q + 1
            elif pos == q + 1:
                role = UNDER if e > 0 else OVER
                passages.append(Passage(str(i + 1), role, sign))
                pos = q
    # reparse so crossing labels follow first-appearance order
    return parse_gauss_code(" ".join(p.token() for p in passages))


def connected_sum(a: GaussCode, b: GaussCode) -> GaussCode:
    """Concatenate two codes, relabeling the second past the first."""
    shift = len(a.crossings)
    moved = tuple(
        Passage(str(int(p.label) + shift), p.role, p.sign) for p in b.passages
    )
    return GaussCode(a.passages + moved)


BRAID_WORDS = {
    "3_1": [1, 1, 1],
    "4_1": [1, -2, 1, -2],
    "5_1": [1, 1, 1, 1, 1],
    "5_2": [1, 1, 1, 2, -1, 2],
    "6_1": [1, 1, 2, -1, -3, 2, -3],
    "6_2": [1, 1, 1, -2, 1, -2],
    "6_3": [1, 1, -2, 1, -2, -2],
}
