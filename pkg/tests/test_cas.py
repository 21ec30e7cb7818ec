import random
from fractions import Fraction

import pytest

from splab.cas import (
    MPoly,
    NonzeroWitness,
    ProbablyZero,
    RatFunc,
    degeneracy_test_numeric,
    degeneracy_test_rational,
    differentiate,
    divexact,
    eliminate_dilate,
    eliminate_shifted_product,
    eliminate_sp,
    flip_branch,
    mixed_log_partial,
    parse_poly,
    poly_gcd,
)
from splab.cas import expr as ex
from splab.errors import (
    DomainError,
    LambdaOne,
    PolyParseError,
    PreconditionError,
    UnsupportedEvaluation,
)
from splab.radical_field import RadicalSum, sqrt_int

X, Y, Z = MPoly.var("X"), MPoly.var("Y"), MPoly.var("Z")


def random_poly(rng, max_deg=2, max_terms=4, zvar=False):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        a = rng.randint(0, max_deg)
        b = rng.randint(0, max_deg - a if max_deg > a else 0)
        c = rng.randint(0, 1) if zvar else 0
        terms[(a, b, c)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return MPoly(terms)


# -- parse_poly -----------------------------------------------------------------------


def test_parse_poly_examples():
    assert parse_poly("X*(Y-X)-Z") == X * Y - X**2 - Z
    assert parse_poly("0").is_zero()
    with pytest.raises(PolyParseError):
        parse_poly("X^2+")


def test_parse_poly_rationals_and_parens():
    assert parse_poly("3/2*X^2*Y-Z+1") == (X**2 * Y).scale(Fraction(3, 2)) - Z + MPoly.const(1)
    assert parse_poly("(X-Y)^2") == X**2 - (X * Y).scale(2) + Y**2
    assert parse_poly("-X") == -X


@pytest.mark.parametrize("bad", ["", "X^", "1/0", "X Y", "(X", "X^-2", "^2", "*X"])
def test_parse_poly_rejects(bad):
    with pytest.raises(PolyParseError):
        parse_poly(bad)


def test_parse_poly_error_position():
    try:
        parse_poly("X^2+")
    except PolyParseError as exc:
        assert exc.position == 4


def test_poly_text_round_trip():
    rng = random.Random(17)
    for _ in range(100):
        p = random_poly(rng, max_deg=3, zvar=True)
        assert parse_poly(p.to_text()) == p


# -- MPoly misc ------------------------------------------------------------------------


def test_mpoly_eval_ring_matches_eval():
    rng = random.Random(23)
    for _ in range(30):
        p = random_poly(rng, zvar=True)
        pt = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
        ring = p.eval_ring(tuple(RadicalSum.from_fraction(v) for v in pt))
        assert ring.as_fraction() == p.eval(pt)


def test_mpoly_grlex_text_order():
    assert (X * Y - X**2 - Z).to_text() == "-X^2+X*Y-Z"


# -- poly_gcd --------------------------------------------------------------------------


def test_gcd_examples():
    assert poly_gcd(X**2 - Y**2, X - Y) == X - Y
    assert poly_gcd(parse_poly("X^2-Y^2"), MPoly.const(1)) == MPoly.const(1)
    g = poly_gcd(parse_poly("(Y-2*X)^2"), parse_poly("(Y-2*X)^3"))
    assert g == parse_poly("(Y-2*X)^2")
    assert divexact(parse_poly("(Y-2*X)^3"), g) is not None


def test_gcd_zero_conventions():
    p = (X - Y).scale(Fraction(3, 2))
    assert poly_gcd(p, MPoly.zero()) == X - Y
    assert poly_gcd(MPoly.zero(), p) == X - Y
    with pytest.raises(ValueError):
        poly_gcd(MPoly.zero(), MPoly.zero())


def test_gcd_random_products():
    rng = random.Random(31)
    for _ in range(40):
        g = random_poly(rng, max_deg=1, max_terms=2)
        if g.is_zero() or g.is_const():
            continue
        p = g * random_poly(rng, max_deg=1, max_terms=2)
        q = g * random_poly(rng, max_deg=1, max_terms=2)
        if p.is_zero() or q.is_zero():
            continue
        d = poly_gcd(p, q)
        assert divexact(p, d) is not None
        assert divexact(q, d) is not None
        assert divexact(d, g.primitive()) is not None  # g divides the gcd


def test_divexact_inexact_returns_none():
    assert divexact(X**2 - Y, X + Y) is None
    assert divexact(X**2 - Y**2, X - Y) == X + Y


# -- differentiate -----------------------------------------------------------------------


def test_differentiate_examples():
    assert differentiate(RatFunc(X**2 * Y), "X") == RatFunc((X * Y).scale(2))
    assert differentiate(RatFunc(X, Y), "Y") == RatFunc(-X, Y * Y)
    assert differentiate(RatFunc.const(7), "X").is_zero()


def test_ratfunc_normalization_invariant():
    rng = random.Random(37)
    ops_checked = 0
    while ops_checked < 60:
        num = random_poly(rng)
        den = random_poly(rng)
        num2 = random_poly(rng)
        den2 = random_poly(rng)
        if den.is_zero() or den2.is_zero():
            continue
        f = RatFunc(num, den)
        g = RatFunc(num2, den2)
        results = [f + g, f - g, f * g, f.diff("X"), f.diff("Y")]
        if not g.is_zero():
            results.append(f / g)
        for r in results:
            if r.is_zero():
                assert r.den == MPoly.const(1)
                continue
            assert poly_gcd(r.num, r.den) == MPoly.const(1)
            lead = r.den.leading()[1]
            assert lead > 0
            assert r.den.signed_content() == 1  # primitive integer denominator
        ops_checked += 1


def test_differentiate_finite_difference_rate():
    rng = random.Random(41)
    checked = 0
    while checked < 25:
        den = random_poly(rng, max_terms=2) + MPoly.const(1)
        if den.is_zero():
            continue
        f = RatFunc(random_poly(rng), den)
        df = differentiate(f, "X")
        pt = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3))
        try:
            exact = df.eval(pt)
            errs = []
            for h in (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)):
                up = f.eval((pt[0] + h, pt[1], pt[2]))
                dn = f.eval((pt[0] - h, pt[1], pt[2]))
                errs.append(abs((up - dn) / (2 * h) - exact))
        except ZeroDivisionError:
            continue
        if any(e == 0 for e in errs):
            continue  # exact cancellation at a specific h says nothing about rate
        for e1, e2 in zip(errs, errs[1:]):
            assert e2 <= e1 / 3  # O(h^2): halving h divides the error by ~4
        checked += 1


# -- degeneracy (rational path) -------------------------------------------------------------


def eq12_closed_form(lam: Fraction) -> RatFunc:
    bracket = 2 * (1 + lam) * (4 * lam - (1 + lam) ** 2)
    num = MPoly.const(bracket) * (Y * Y - (X * X).scale(lam))
    den = (X.scale(-2 * lam) + Y.scale(1 + lam)) ** 2 * (
        Y.scale(-2) + X.scale(1 + lam)
    ) ** 2
    return RatFunc(num, den)


def test_degeneracy_sum_product_surface():
    rep = degeneracy_test_rational(RatFunc(parse_poly("X*(Y-X)")))
    assert rep.T == RatFunc(MPoly.const(2), parse_poly("(Y-2*X)^2"))
    assert not rep.identically_zero
    assert rep.witness == (Fraction(0), Fraction(1))
    assert rep.witness_value == 2


def test_degeneracy_dilate_lambda2():
    f, _ = eliminate_dilate(2)
    assert f == RatFunc(parse_poly("(X-Y)*(Y-2*X)"))
    rep = degeneracy_test_rational(f)
    assert rep.T.eval((1, 1, 0)) == 6
    rep11 = degeneracy_test_rational(f, prefer=[(Fraction(1), Fraction(1))])
    assert rep11.witness == (Fraction(1), Fraction(1))
    assert rep11.witness_value == 6


def test_degeneracy_dichotomy():
    lams = [Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(2), Fraction(3),
            Fraction(-2), Fraction(5, 3)]
    for lam in lams:
        f, _ = eliminate_dilate(lam)
        rep = degeneracy_test_rational(f)
        if lam == -1:
            assert rep.identically_zero
            assert rep.witness is None
        else:
            assert not rep.identically_zero
            assert rep.T == eq12_closed_form(lam)


def test_degeneracy_lambda_minus_one_factored_case():
    f = RatFunc(parse_poly("(X-Y)*(Y+X)"))
    rep = degeneracy_test_rational(f)
    assert rep.identically_zero


def test_degeneracy_preconditions():
    with pytest.raises(PreconditionError):
        degeneracy_test_rational(RatFunc(Y * Y))
    with pytest.raises(PreconditionError):
        degeneracy_test_rational(RatFunc(X + Z))


def test_mixed_partial_symmetry_random():
    rng = random.Random(43)
    checked = 0
    while checked < 20:
        den = random_poly(rng, max_terms=2) + MPoly.const(1)
        if den.is_zero():
            continue
        f = RatFunc(random_poly(rng), den)
        try:
            t1 = mixed_log_partial(f, x_first=True)
            t2 = mixed_log_partial(f, x_first=False)
        except PreconditionError:
            continue
        assert t1 == t2
        checked += 1


# -- eliminations ------------------------------------------------------------------------


def test_eliminate_dilate_examples():
    f2, big2 = eliminate_dilate(2)
    assert f2 == RatFunc(parse_poly("(X-Y)*(Y-2*X)"))
    assert big2 == parse_poly("(X-Y)*(Y-2*X)-Z")
    f0, _ = eliminate_dilate(0)
    assert f0 == RatFunc(parse_poly("(X-Y)*Y"))
    with pytest.raises(LambdaOne):
        eliminate_dilate(1)


def test_eliminate_dilate_substitution():
    rng = random.Random(47)
    for lam in (Fraction(2), Fraction(-3), Fraction(1, 2)):
        _, big = eliminate_dilate(lam)
        for _ in range(50):
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            assert big.eval((a + b, a + lam * b, a * b)) == 0


def test_eliminate_sp_examples():
    F = eliminate_sp()
    assert F == parse_poly("X*(Y-X)-Z")
    rng = random.Random(53)
    for _ in range(50):
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        assert F.eval((a, a + b, a * b)) == 0
    assert F.eval((0, 5, 0)) == 0
    assert F.eval((1, 1, 1)) == -1
    # structural check: Z appears isolated and linear
    zmonos = {e: c for e, c in F.terms.items() if e[2]}
    assert zmonos == {(0, 0, 1): Fraction(-1)}


def test_eliminate_shifted_product_examples():
    assert eliminate_shifted_product(0, 0) == ex.var("Y")
    e = eliminate_shifted_product(1, 5, validate_samples=200)
    env = {"X": RadicalSum.from_fraction(5), "Y": RadicalSum.from_fraction(6)}
    assert ex.eval_radical(flip_branch(e), env).as_fraction() == 24  # a=2 < b=3
    e10 = eliminate_shifted_product(1, 0, validate_samples=200)
    env2 = {"X": RadicalSum.from_fraction(5), "Y": RadicalSum.from_fraction(4)}
    assert ex.eval_radical(flip_branch(e10), env2).as_fraction() == 8  # a=1, b=4


def test_eliminate_shifted_single_sqrt_node():
    e = eliminate_shifted_product(2, 7, validate_samples=10)
    nodes = ex.sqrt_nodes(e)
    assert len(nodes) == 1
    assert nodes[0].sign == 1


def test_shifted_branch_matches_order():
    e = eliminate_shifted_product(Fraction(1, 2), 3, validate_samples=0)
    flipped = flip_branch(e)
    rng = random.Random(59)
    for _ in range(100):
        a = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        b = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        env = {
            "X": RadicalSum.from_fraction(a + b),
            "Y": RadicalSum.from_fraction(a * b),
        }
        want = (a + Fraction(1, 2)) * (b + 3)
        chosen = e if a >= b else flipped
        assert ex.eval_radical(chosen, env).as_fraction() == want


# -- expr / numeric degeneracy -----------------------------------------------------------


def test_expr_eval_radical_sqrt_errors():
    root = ex.sqrt(ex.var("X"))
    with pytest.raises(UnsupportedEvaluation):
        ex.eval_radical(root, {"X": RadicalSum.from_fraction(-1)})
    with pytest.raises(UnsupportedEvaluation):
        ex.eval_radical(root, {"X": RadicalSum.from_fraction(2) + sqrt_int(2)})
    got = ex.eval_radical(root, {"X": RadicalSum.from_fraction(Fraction(9, 4))})
    assert got.as_fraction() == Fraction(3, 2)


def test_numeric_polynomial_nonzero():
    lifted = ex.poly_to_expr(parse_poly("X*(Y-X)"))
    res = degeneracy_test_numeric(lifted, samples=6)
    assert isinstance(res, NonzeroWitness)
    assert not res.enclosure.contains_zero()


def test_numeric_additive_probably_zero():
    res = degeneracy_test_numeric(ex.add(ex.var("X"), ex.var("Y")), samples=6)
    assert isinstance(res, ProbablyZero)
    assert res.samples == 6


def test_numeric_shifted_alpha1_beta0():
    branch = eliminate_shifted_product(1, 0, validate_samples=0)
    res = degeneracy_test_numeric(branch, samples=16)
    assert isinstance(res, NonzeroWitness)


def test_numeric_precondition():
    with pytest.raises(PreconditionError):
        degeneracy_test_numeric(ex.var("Y"))


def test_numeric_agrees_with_rational():
    rng = random.Random(61)
    checked = 0
    while checked < 15:
        p = random_poly(rng, max_deg=2, max_terms=3)
        f = RatFunc(p)
        try:
            rep = degeneracy_test_rational(f)
        except PreconditionError:
            continue
        try:
            res = degeneracy_test_numeric(
                ex.poly_to_expr(p), samples=4, precision_bits=256
            )
        except DomainError:
            continue
        if rep.identically_zero:
            assert isinstance(res, ProbablyZero)
        else:
            assert isinstance(res, NonzeroWitness)
        checked += 1
