import random
from fractions import Fraction

import pytest

from splab.constructions import (
    ars2,
    build,
    chang,
    figure1_lines_hyperbolas,
    hyperbola_pair_families,
    iroot,
    parse_instance,
    pencil,
    sieve_primes_to,
    verify_predicted,
    write_instance,
)
from splab.errors import DiscriminantFailure, InsufficientPrimes
from splab.graph_sets import (
    restricted_dilate_sum,
    restricted_product,
    restricted_ratio,
    restricted_shifted_product,
    restricted_sum,
)
from splab.radical_field import is_squarefree


def test_sieve():
    assert sieve_primes_to(1) == []
    assert sieve_primes_to(27) == [2, 3, 5, 7, 11, 13, 17, 19, 23]
    assert len(sieve_primes_to(1000)) == 168


def test_iroot():
    assert iroot(243, 5) == 3
    assert iroot(242, 5) == 2
    assert iroot(10**15, 5) == 1000
    for n in (0, 1, 7, 31, 32, 33, 1024):
        r = iroot(n, 5)
        assert r**5 <= n < (r + 1) ** 5


# -- chang ---------------------------------------------------------------------------


def test_chang_n3():
    inst = chang(3)
    assert inst.graph.size == 9
    assert len(inst.graph.left) == 13
    assert len(restricted_sum(inst.graph)) == 3
    assert len(restricted_product(inst.graph)) == 5
    assert verify_predicted(inst) == []


def test_chang_n1():
    inst = chang(1)
    assert {v.to_text() for v in inst.graph.left} == {"0", "2"}
    assert inst.graph.size == 1


def test_chang_edge_injectivity():
    for n in (2, 5, 12):
        assert chang(n).graph.size == n * n


def test_chang_elements_canonical():
    inst = chang(6)
    for v in inst.graph.left:
        for t in v.terms:
            assert is_squarefree(t.radicand)


# -- figure 1 -------------------------------------------------------------------------


def test_figure1_n2():
    inst = figure1_lines_hyperbolas(2)
    assert inst.graph.size == 8
    assert len(restricted_sum(inst.graph)) == 2
    assert len(restricted_product(inst.graph)) == 2
    assert verify_predicted(inst) == []


def test_figure1_equality_with_trivial_bound():
    for n in (1, 2, 5):
        inst = figure1_lines_hyperbolas(n)
        m = max(len(restricted_sum(inst.graph)), len(restricted_product(inst.graph)))
        assert 2 * m * m == inst.graph.size


def test_figure1_n1():
    inst = figure1_lines_hyperbolas(1)
    assert inst.graph.size == 2


# -- ars2 ----------------------------------------------------------------------------


def test_ars2_n243():
    inst = ars2(243, 2)
    assert inst.graph.size == 84
    assert verify_predicted(inst) == []


def test_ars2_product_bound_exact():
    for n in (243, 1024):
        inst = ars2(n, 2)
        prod = len(restricted_product(inst.graph))
        assert prod**5 <= n**6  # |A .G A| <= n^(6/5) exactly


def test_ars2_sum_radicands_squarefree():
    inst = ars2(243, 2)
    for v in restricted_sum(inst.graph):
        for t in v.terms:
            assert is_squarefree(t.radicand)


def test_ars2_insufficient_primes():
    with pytest.raises(InsufficientPrimes):
        ars2(100, 2)


def test_ars2_graph_count_matches_combinatorics():
    for n in (243, 1024):
        inst = ars2(n, 2)
        k1 = iroot(n, 5)
        k3 = iroot(n**3, 5)
        s = len(sieve_primes_to(k1))
        m = len(sieve_primes_to(k3)) - 2
        assert inst.graph.size == s * (s - 1) * m * (m - 1)


# -- pencil --------------------------------------------------------------------------


def test_pencil_n2_lambda3():
    inst = pencil(2, 3)
    g = inst.graph
    assert g.size == 4
    assert {v.as_fraction() for v in restricted_sum(g)} == {4, 8}
    assert {v.as_fraction() for v in restricted_dilate_sum(g, 3)} == {-4, -8}
    assert {v.as_fraction() for v in restricted_ratio(g)} == {
        Fraction(-2),
        Fraction(-7, 3),
        Fraction(-5, 3),
    }
    assert verify_predicted(inst) == []


def test_pencil_n1():
    inst = pencil(1, 3)
    g = inst.graph
    assert g.size == 1
    assert len(restricted_sum(g)) == 1
    assert len(restricted_dilate_sum(g, 3)) == 1
    assert len(restricted_ratio(g)) == 1


def test_pencil_ratio_bound():
    for n in (2, 5, 9):
        inst = pencil(n, 3)
        assert len(restricted_ratio(inst.graph)) <= 2 * n - 1


def test_pencil_collision_downgrade():
    inst = pencil(4, 1)
    assert inst.params["collisions"] > 0
    assert inst.graph.size == 4 * 5 // 2
    assert verify_predicted(inst) == []


def test_pencil_rejects_zero_lambda():
    with pytest.raises(ValueError):
        pencil(3, 0)


def test_pencil_fractional_lambda():
    inst = pencil(3, Fraction(1, 2))
    assert inst.graph.size == 9
    assert verify_predicted(inst) == []


# -- hyperbola pair families -----------------------------------------------------------


def test_hyperbola_pair_exact_sets():
    inst = hyperbola_pair_families(3, Fraction(1), Fraction(2))
    g = inst.graph
    m_shift = inst.params["M"]
    assert g.size == 18
    assert {v.as_fraction() for v in restricted_product(g)} == {1, 2, 3}
    shifted = restricted_shifted_product(g, 1, 2)
    assert {v.as_fraction() for v in shifted} == {m_shift + 1, m_shift + 2, m_shift + 3}
    assert verify_predicted(inst) == []


def test_hyperbola_pair_trivial_equality():
    inst = hyperbola_pair_families(2, Fraction(1), Fraction(2))
    m = max(
        len(restricted_product(inst.graph)),
        len(restricted_shifted_product(inst.graph, 1, 2)),
    )
    assert 2 * m * m == inst.graph.size


def test_hyperbola_pair_n1():
    inst = hyperbola_pair_families(1, Fraction(2), Fraction(3))
    assert inst.graph.size == 2
    assert len(restricted_product(inst.graph)) == 1


def test_hyperbola_pair_negative_shifts():
    inst = hyperbola_pair_families(2, Fraction(-1, 2), Fraction(3, 4))
    assert inst.graph.size == 8
    assert verify_predicted(inst) == []


def test_hyperbola_pair_alpha_equals_beta_allowed():
    inst = hyperbola_pair_families(2, Fraction(2), Fraction(2))
    assert inst.graph.size == 8
    assert verify_predicted(inst) == []


def test_hyperbola_pair_rejects():
    with pytest.raises(ValueError):
        hyperbola_pair_families(2, Fraction(1), Fraction(0))
    with pytest.raises(DiscriminantFailure):
        hyperbola_pair_families(2, Fraction(0), Fraction(1))


# -- dispatch + serialization -----------------------------------------------------------


def test_build_dispatch():
    assert build("chang", 3).name == "chang"
    assert build("figure1", 2).name == "figure1"
    assert build("ars2", 243, lam=2).name == "ars2"
    assert build("pencil", 2, lam=3).name == "pencil"
    assert build("hyperbola-pair", 2, alpha=1, beta=2).name == "hyperbola-pair"
    with pytest.raises(ValueError):
        build("nope", 3)
    with pytest.raises(ValueError):
        build("pencil", 3)


def test_instance_round_trip():
    for inst in (
        chang(3),
        pencil(2, Fraction(5, 2)),
        hyperbola_pair_families(2, Fraction(1), Fraction(2)),
    ):
        text = write_instance(inst)
        back = parse_instance(text)
        assert write_instance(back) == text
        assert back.name == inst.name
        assert back.predicted == inst.predicted
        assert back.graph == inst.graph


def test_predicted_statistics_all_constructions():
    rng = random.Random(5)
    instances = [
        chang(rng.randint(2, 8)),
        figure1_lines_hyperbolas(rng.randint(2, 6)),
        ars2(300, 3),
        pencil(rng.randint(2, 6), Fraction(3)),
        hyperbola_pair_families(rng.randint(2, 4), Fraction(1), Fraction(2)),
    ]
    for inst in instances:
        assert verify_predicted(inst) == []
