"""Full classification of the quivers with at most two vertices and two arrows.

Hand-checkable expectations: bounded growth needs at most one cycle through
any vertex and no route between distinct cycles; regularity needs every
vertex to lie on exactly one cycle (or no arrows at all); the two-cycle is
the smallest twisted instance; a cycle wired to anything else passes the
gate yet has persistently nonzero Ext data, which the engines report as
undecidable at a truncation rather than mislabeling it.
"""

from itertools import combinations_with_replacement

import pytest

from quiverhom.exactlin import Field
from quiverhom.quiver import Arrow, Quiver, growth_gate
from quiverhom.homology import StabilizationError
from quiverhom.regularity import as_regular_check, nakayama

Q = Field(0)


def classify(quiver, trunc=10, m_max=8):
    gate = growth_gate(quiver)
    if not gate.bounded:
        return "unbounded"
    try:
        verdict = as_regular_check(quiver, trunc, Q)
    except StabilizationError:
        return "undecided"
    if not verdict.as_regular:
        return "not regular"
    nak = nakayama(quiver, trunc, m_max, Q)
    return f"regular n={verdict.gldim} order={nak.order} inner={nak.inner}"


EXPECTED_ONE_VERTEX = {
    0: "regular n=0 order=1 inner=yes",
    1: "regular n=1 order=1 inner=yes",
    2: "unbounded",
}

SLOTS = [(0, 0), (0, 1), (1, 0), (1, 1)]
EXPECTED_TWO_VERTEX = {
    (): "regular n=0 order=1 inner=yes",
    (0,): "not regular",          # loop at 1, vertex 2 stranded
    (1,): "not regular",          # single arrow 1 -> 2
    (2,): "not regular",
    (3,): "not regular",
    (0, 0): "unbounded",          # double loop
    (0, 1): "undecided",          # loop with exit tail
    (0, 2): "undecided",          # loop with entering tail
    (0, 3): "regular n=1 order=1 inner=yes",   # disjoint loops
    (1, 1): "not regular",        # double arrow
    (1, 2): "regular n=1 order=2 inner=no",    # oriented two-cycle
    (1, 3): "undecided",
    (2, 2): "not regular",
    (2, 3): "undecided",
    (3, 3): "unbounded",
}


@pytest.mark.parametrize("n_loops", sorted(EXPECTED_ONE_VERTEX))
def test_one_vertex_classification(n_loops):
    quiver = Quiver(1, tuple(Arrow(f"l{k}", 0, 0) for k in range(n_loops)))
    assert classify(quiver) == EXPECTED_ONE_VERTEX[n_loops]


@pytest.mark.parametrize("combo", sorted(EXPECTED_TWO_VERTEX))
def test_two_vertex_classification(combo):
    arrows = tuple(Arrow(f"a{k}", *SLOTS[c]) for k, c in enumerate(combo))
    quiver = Quiver(2, arrows)
    assert classify(quiver) == EXPECTED_TWO_VERTEX[tuple(combo)]


def test_expected_table_is_exhaustive():
    combos = set()
    for size in range(3):
        combos.update(combinations_with_replacement(range(4), size))
    assert combos == set(EXPECTED_TWO_VERTEX)


THREE_VERTEX_SHAPES = {
    "path a3": ("vertices: 3\narrow a 1 2\narrow b 2 3\n", "not regular"),
    "star out": ("vertices: 3\narrow a 1 2\narrow b 1 3\n", "not regular"),
    "star in": ("vertices: 3\narrow a 2 1\narrow b 3 1\n", "not regular"),
    "three cycle": ("vertices: 3\narrow a 1 2\narrow b 2 3\narrow c 3 1\n",
                    "regular n=1 order=3 inner=no"),
    "loop plus a2": ("vertices: 3\narrow x 1 1\narrow a 2 3\n", "not regular"),
    "loop plus two cycle": ("vertices: 3\narrow x 1 1\narrow a 2 3\narrow b 3 2\n",
                            "regular n=1 order=2 inner=no"),
    "two cycle feeding a sink": ("vertices: 3\narrow a 1 2\narrow b 2 1\narrow t 1 3\n",
                                 "undecided"),
}


@pytest.mark.parametrize("name", sorted(THREE_VERTEX_SHAPES))
def test_three_vertex_shapes(name):
    from quiverhom.quiver import parse_quiver

    text, expected = THREE_VERTEX_SHAPES[name]
    quiver = parse_quiver(text)[0]
    assert classify(quiver, trunc=12, m_max=10) == expected
