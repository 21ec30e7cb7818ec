import random
from fractions import Fraction

import pytest

from splab.errors import DivisionByZero, RadsumParseError, UnsupportedDenominator
from splab.radical_field import (
    Enclosure,
    RadicalSum,
    add,
    div,
    eval_enclosure,
    is_squarefree,
    mul,
    negate,
    parse_radsum,
    separation_bits,
    sqrt_fraction,
    sqrt_int,
    squarefree_decompose,
)

SQUAREFREE = [1, 2, 3, 5, 6, 7, 10, 11, 13, 15, 17, 21]


def random_radsum(rng, max_terms=3, coeff_bound=9):
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        c = Fraction(rng.randint(-coeff_bound, coeff_bound), rng.randint(1, coeff_bound))
        terms.append((c, rng.choice(SQUAREFREE)))
    return RadicalSum(terms)


def F(v):
    return RadicalSum.from_fraction(v)


# -- squarefree decomposition ----------------------------------------------------


def test_squarefree_decompose():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(49) == (7, 1)
    assert squarefree_decompose(360) == (6, 10)
    for m in range(1, 500):
        s, r = squarefree_decompose(m)
        assert s * s * r == m
        assert is_squarefree(r)


def test_squarefree_rejects_nonpositive():
    with pytest.raises(ValueError):
        squarefree_decompose(0)
    with pytest.raises(ValueError):
        squarefree_decompose(-4)


# -- sqrt_int ----------------------------------------------------------------------


def test_sqrt_int_examples():
    assert sqrt_int(1) == F(1)
    assert sqrt_int(4) == F(2)
    assert sqrt_int(12) == parse_radsum("2*sqrt(3)")


def test_sqrt_int_rejects():
    with pytest.raises(ValueError):
        sqrt_int(0)
    with pytest.raises(ValueError):
        sqrt_int(-3)


def test_sqrt_fraction():
    assert sqrt_fraction(Fraction(9, 4)) == F(Fraction(3, 2))
    v = sqrt_fraction(Fraction(2, 3))  # sqrt(6)/3
    assert v * v == F(Fraction(2, 3))
    assert sqrt_fraction(0).is_zero()


# -- add / mul / div examples -------------------------------------------------------


def test_add_examples():
    one_plus = F(1) + sqrt_int(2)
    one_minus = F(1) - sqrt_int(2)
    assert add(one_plus, one_minus) == F(2)
    assert add(sqrt_int(2) + sqrt_int(3), sqrt_int(2) - sqrt_int(3)) == sqrt_int(2).scale(2)
    x = random_radsum(random.Random(7))
    assert add(RadicalSum.zero(), x) == x


def test_mul_examples():
    assert mul(sqrt_int(5) + sqrt_int(2), sqrt_int(5) - sqrt_int(2)) == F(3)
    assert mul(sqrt_int(2), sqrt_int(6)) == parse_radsum("2*sqrt(3)")
    x = random_radsum(random.Random(8))
    assert mul(x, RadicalSum.one()) == x


def test_div_examples():
    assert div(F(1), F(1) + sqrt_int(2)) == F(-1) + sqrt_int(2)
    assert div(F(6), F(2)) == F(3)
    with pytest.raises(UnsupportedDenominator):
        div(F(1), sqrt_int(2) + sqrt_int(3) + sqrt_int(5))
    with pytest.raises(UnsupportedDenominator):
        div(F(1), sqrt_int(2) + sqrt_int(3))
    with pytest.raises(DivisionByZero):
        div(F(1), RadicalSum.zero())


def test_div_single_radical_denominator():
    assert div(F(1), sqrt_int(2)) == parse_radsum("1/2*sqrt(2)")
    assert div(sqrt_int(3), parse_radsum("2*sqrt(3)")) == F(Fraction(1, 2))


def test_div_mul_inverse_random():
    rng = random.Random(42)
    checked = 0
    while checked < 300:
        x = random_radsum(rng)
        kind = rng.randint(0, 2)
        if kind == 0:
            y = F(Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9)))
        elif kind == 1:
            y = F(rng.randint(1, 9)).scale(Fraction(1, rng.randint(1, 5))) * sqrt_int(
                rng.choice(SQUAREFREE)
            )
        else:
            y = F(rng.randint(-5, 5)) + sqrt_int(rng.choice(SQUAREFREE[1:])).scale(
                rng.randint(1, 5)
            )
        if y.is_zero():
            continue
        q = div(x, y)
        assert mul(q, y) == x
        checked += 1


# -- ring laws (the large-sample run lives in the acceptance suite) ------------------


def test_ring_laws_sample():
    rng = random.Random(1)
    for _ in range(500):
        x, y, z = (random_radsum(rng) for _ in range(3))
        assert x + y == y + x
        assert (x + y) + z == x + (y + z)
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + negate(x)).is_zero()


def test_squarefree_invariant_after_ops():
    rng = random.Random(2)
    for _ in range(200):
        x, y = random_radsum(rng), random_radsum(rng)
        for v in (x + y, x * y, negate(x)):
            for t in v.terms:
                assert is_squarefree(t.radicand)
                assert t.coefficient != 0
            rads = [t.radicand for t in v.terms]
            assert rads == sorted(set(rads))


# -- enclosures -----------------------------------------------------------------------


def test_enclosure_examples():
    enc = eval_enclosure(parse_radsum("2*sqrt(3)"), 64)
    assert enc.lo <= Fraction(34641016151377545, 10**16) + Fraction(1, 10**15)
    assert enc.contains(enc.midpoint())
    assert enc.width() < Fraction(1, 2**40)
    zero = eval_enclosure(RadicalSum.zero(), 64)
    assert zero == Enclosure(Fraction(0), Fraction(0))
    a = eval_enclosure(F(1) + sqrt_int(2) + (F(1) - sqrt_int(2)), 64)
    b = eval_enclosure(F(2), 64)
    assert a.intersects(b)


def test_enclosure_precision_floor():
    with pytest.raises(ValueError):
        eval_enclosure(F(1), 8)


def test_equality_enclosure_consistency():
    rng = random.Random(3)
    for _ in range(40):
        x = random_radsum(rng)
        y = random_radsum(rng)
        if x == y:
            for bits in (16, 64, 256):
                assert eval_enclosure(x, bits).intersects(eval_enclosure(y, bits))
        else:
            assert separation_bits(x, y) is not None
    x = random_radsum(rng)
    assert separation_bits(x, x) is None


def test_enclosure_width_shrinks():
    v = parse_radsum("sqrt(2)+1/3*sqrt(7)")
    w64 = eval_enclosure(v, 64).width()
    w256 = eval_enclosure(v, 256).width()
    assert w256 < w64 / 2**100


# -- canonical form / hashing ---------------------------------------------------------


def test_structural_equality_and_hash():
    a = parse_radsum("1+sqrt(2)")
    b = F(1) + sqrt_int(2)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
    assert a != parse_radsum("1+sqrt(3)")


def test_canonical_zero():
    assert RadicalSum(((Fraction(0), 5),)).is_zero()
    assert parse_radsum("sqrt(2)-sqrt(2)").is_zero()
    assert RadicalSum.zero().to_text() == "0"


def test_sort_key_order():
    vals = [parse_radsum(t) for t in ["2", "1+sqrt(2)", "0", "sqrt(3)", "-5"]]
    ordered = sorted(vals, key=RadicalSum.sort_key)
    assert [v.to_text() for v in ordered] == ["0", "-5", "2", "sqrt(3)", "1+sqrt(2)"]


# -- text round trip ------------------------------------------------------------------


def test_parse_examples():
    assert parse_radsum("3/2*sqrt(21)+1").to_text() == "1+3/2*sqrt(21)"
    assert parse_radsum("0").is_zero()
    assert parse_radsum("sqrt(12)").to_text() == "2*sqrt(3)"
    assert parse_radsum("2+3") == F(5)
    assert parse_radsum("-sqrt(2)") == negate(sqrt_int(2))


@pytest.mark.parametrize(
    "bad", ["", "sqrt()", "1/0", "2**sqrt(2)", "sqrt(-2)", "w", "1+", "sqrt(0)", "1 2"]
)
def test_parse_rejects(bad):
    with pytest.raises(RadsumParseError):
        parse_radsum(bad)


def test_round_trip_random():
    rng = random.Random(4)
    for _ in range(300):
        x = random_radsum(rng, max_terms=4)
        assert parse_radsum(x.to_text()) == x
