import pytest

from quiverhom.quiver import (
    Path,
    QuiverParseError,
    compose,
    enumerate_paths,
    growth_gate,
    opposite,
    parse_quiver,
    path_count_matrix,
    trivial_path,
)


LOOP = "vertices: 1\narrow x 1 1\n"
TWO_CYCLE = "vertices: 2\narrow x 1 2\narrow y 2 1\n"
KRONECKER = "vertices: 2\narrow u 1 2\narrow v 1 2\n"
TWO_LOOPS = "vertices: 1\narrow x 1 1\narrow y 1 1\n"
NO_ARROW = "vertices: 1\n"
THREE_CYCLE = "vertices: 3\narrow a 1 2\narrow b 2 3\narrow c 3 1\n"


def q(text):
    return parse_quiver(text)[0]


def test_parse_loop():
    quiv, fld = parse_quiver(LOOP)
    assert quiv.vertex_count == 1
    assert len(quiv.arrows) == 1
    assert quiv.arrows[0].source == 0 and quiv.arrows[0].target == 0
    assert fld.characteristic == 0


def test_parse_two_cycle_and_field():
    quiv, fld = parse_quiver(TWO_CYCLE + "field: F7\n")
    assert quiv.vertex_count == 2
    assert fld.characteristic == 7


def test_parse_duplicate_label():
    with pytest.raises(QuiverParseError, match="line 3"):
        parse_quiver("vertices: 2\narrow x 1 2\narrow x 2 1\n")


def test_parse_out_of_range():
    with pytest.raises(QuiverParseError, match="out of range"):
        parse_quiver("vertices: 2\narrow x 1 3\n")


def test_parse_malformed():
    with pytest.raises(QuiverParseError, match="line 2"):
        parse_quiver("vertices: 1\nzigzag\n")


def test_parse_comments_ok():
    quiv, _ = parse_quiver("# a loop\nvertices: 1\n\narrow x 1 1\n")
    assert len(quiv.arrows) == 1


def test_compose_convention():
    quiv = q(TWO_CYCLE)
    x = Path(0, 1, (0,))
    y = Path(1, 0, (1,))
    yx = compose(y, x)  # traverse x first, then y
    assert yx.source == 0 and yx.target == 0
    assert yx.arrows == (0, 1)
    with pytest.raises(ValueError):
        compose(x, x)


def test_enumerate_loop():
    quiv = q(LOOP)
    table = enumerate_paths(quiv, 3)
    for ell in range(4):
        assert len(table.by_length[ell]) == 1


def test_enumerate_two_cycle_parity():
    quiv = q(TWO_CYCLE)
    table = enumerate_paths(quiv, 4)
    for ell in range(5):
        for s in (0, 1):
            ends = [p.target for p in table.paths(source=s, length=ell)]
            assert len(ends) == 1
            assert ends[0] == (s if ell % 2 == 0 else 1 - s)


def test_enumerate_no_arrows():
    quiv = q(NO_ARROW)
    table = enumerate_paths(quiv, 5)
    assert table.paths() == [trivial_path(0)]


def test_counts_match_adjacency_powers():
    for text in (LOOP, TWO_CYCLE, KRONECKER, THREE_CYCLE):
        quiv = q(text)
        table = enumerate_paths(quiv, 5)
        for ell in range(6):
            counts = path_count_matrix(quiv, ell)
            for s in quiv.vertices:
                for t in quiv.vertices:
                    assert counts[s][t] == table.count(s, t, ell)


def test_gate_two_cycle_bounded_period_2():
    verdict = growth_gate(q(TWO_CYCLE))
    assert verdict.bounded
    assert verdict.period == 2


def test_gate_two_loops_unbounded_with_witness():
    verdict = growth_gate(q(TWO_LOOPS))
    assert not verdict.bounded
    w = verdict.witness
    p1, p2 = w["paths"]
    assert p1 != p2
    assert p1.length == p2.length == 1
    assert w["vertex_pair"] == (0, 0)


def test_gate_acyclic_bounded():
    verdict = growth_gate(q(KRONECKER))
    assert verdict.bounded
    # path counts vanish beyond length 1
    assert path_count_matrix(q(KRONECKER), 2) == [[0, 0], [0, 0]]


def test_gate_linked_cycles_unbounded():
    text = "vertices: 2\narrow x 1 1\narrow t 1 2\narrow y 2 2\n"
    verdict = growth_gate(q(text))
    assert not verdict.bounded
    p1, p2 = verdict.witness["paths"]
    assert p1 != p2
    assert p1.length == p2.length
    assert (p1.source, p1.target) == (p2.source, p2.target)


def test_gate_bounded_periodicity_certificate():
    for text in (LOOP, TWO_CYCLE, THREE_CYCLE, NO_ARROW):
        verdict = growth_gate(q(text))
        assert verdict.bounded
        # certificate: counts at transient+period equal counts at transient
        adj_t = path_count_matrix(q(text), verdict.transient)
        adj_tp = path_count_matrix(q(text), verdict.transient + verdict.period)
        assert adj_t == adj_tp


def test_opposite_involution():
    for text in (LOOP, TWO_CYCLE, KRONECKER):
        quiv = q(text)
        assert opposite(opposite(quiv)) == quiv


def test_opposite_swaps_two_cycle():
    quiv = opposite(q(TWO_CYCLE))
    assert quiv.arrows[0].source == 1 and quiv.arrows[0].target == 0
    assert quiv.arrows[0].label == "x"


def test_opposite_enumeration_mirrors():
    quiv = q(THREE_CYCLE)
    table = enumerate_paths(quiv, 4)
    table_op = enumerate_paths(opposite(quiv), 4)
    for ell in range(5):
        for s in quiv.vertices:
            for t in quiv.vertices:
                assert table.count(s, t, ell) == table_op.count(t, s, ell)
