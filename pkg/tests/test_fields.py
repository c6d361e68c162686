import math
import random

import pytest

from wordmap.errors import (
    DescriptorMismatch,
    DivisionByZero,
    InfiniteField,
    NotFound,
    ReduciblePolynomial,
    UsageError,
)
from wordmap.fields import (
    GF,
    Field,
    arith,
    enumerate_elements,
    extend,
    kth_roots,
    parse_field_spec,
    regular_solution_search,
)
from wordmap.polynomials import Poly

F2 = Field("prime", p=2)
F3 = Field("prime", p=3)
F5 = Field("prime", p=5)
F7 = Field("prime", p=7)
Q = Field("rationals")


def test_inverse_f7_exhaustive():
    # 3 * 5 = 15 = 1 mod 7, and every nonzero inverse checks out
    assert F7(3).inverse() == F7(5)
    for x in enumerate_elements(F7):
        if x.is_zero():
            continue
        assert x * x.inverse() == F7.one()


def test_rational_fraction_arithmetic():
    assert Q("1/2") + Q("1/3") == Q("5/6")
    assert (Q(3) / Q(7)).rep.numerator == 3


def test_f4_generator_relation():
    F4 = parse_field_spec("Fq:p=2,d=2,mod=[1,1,1]")
    t = F4.generator()
    assert t * t == t + F4.one()  # reduce t^2 mod t^2+t+1
    assert t * t * t == F4.one()


def test_arith_dispatch_and_errors():
    assert arith("add", F5(2), F5(4)) == F5(1)
    assert arith("inv", F5(2)) == F5(3)
    with pytest.raises(DivisionByZero):
        F5(0).inverse()
    with pytest.raises(DescriptorMismatch):
        F5(1) + F7(1)


def test_kth_roots_f5():
    assert [r.rep for r in kth_roots(F5(4), 2)] == [2, 3]
    assert kth_roots(F5(2), 2) == []
    assert [r.rep for r in kth_roots(F5(0), 2)] == [0]


def test_kth_roots_rationals():
    assert [r.rep for r in kth_roots(Q(8), 3)] == [2]
    roots = kth_roots(Q("9/4"), 2)
    assert sorted(r.rep for r in roots) == [Q("-3/2").rep, Q("3/2").rep]
    assert kth_roots(Q(-4), 2) == []


def test_kth_roots_count_matches_gcd():
    # for e a nonzero k-th power, the number of k-th roots is gcd(k, q-1)
    for field in (F5, F7, GF(9)):
        q = field.cardinality
        for k in (2, 3, 4):
            for x in enumerate_elements(field):
                if x.is_zero():
                    continue
                e = x ** k
                roots = kth_roots(e, k)
                assert len(roots) == math.gcd(k, q - 1)
                assert all(r ** k == e for r in roots)


def test_kth_roots_large_field_tonelli():
    # beyond the scan bound: square roots via Tonelli-Shanks
    big = Field("prime", p=1000003)
    e = big(123456) ** 2
    roots = kth_roots(e, 2)
    assert len(roots) == 2 and all(r * r == e for r in roots)
    L = GF(101 ** 3)
    x = L([3, 5, 7])
    e = x * x
    roots = kth_roots(e, 2)
    assert len(roots) == 2 and all(r * r == e for r in roots)
    # gcd(k, q-1) = 1: unique root by exponent inversion
    e3 = x ** 7
    assert math.gcd(7, 101 ** 3 - 1) == 1
    (r,) = kth_roots(e3, 7)
    assert r ** 7 == e3


def test_enumerate_fields():
    assert [x.rep for x in enumerate_elements(F3)] == [0, 1, 2]
    F4 = GF(4)
    assert len(list(enumerate_elements(F4))) == 4
    with pytest.raises(InfiniteField):
        list(enumerate_elements(Q))


def test_extend_f2_to_f4():
    L, alpha, embed = extend(F2, Poly(F2, [1, 1, 1]))
    assert L.cardinality == 4
    assert (alpha * alpha + alpha + L.one()).is_zero()


def test_extend_f5_nonresidue():
    # t^2 + 2 has no root mod 5 (-2 = 3 is a non-residue)
    assert all((x * x).rep != 3 for x in enumerate_elements(F5))
    L, alpha, embed = extend(F5, Poly(F5, [2, 0, 1]))
    assert L.cardinality == 25
    assert alpha * alpha == embed(F5(3))


def test_extend_rationals_gaussian():
    L, i, embed = extend(Q, Poly(Q, [1, 0, 1]))
    assert (i * i + L.one()).is_zero()
    assert embed(Q("1/2")) + embed(Q("1/2")) == L.one()


def test_extend_rejects_reducible():
    with pytest.raises(ReduciblePolynomial):
        extend(F2, Poly(F2, [0, 1, 1]))  # t^2 + t = t(t+1)


def test_extend_embedding_is_homomorphism():
    rng = random.Random(0)
    L, alpha, embed = extend(F7, Poly(F7, [3, 0, 0, 1]))  # t^3 + 3 irreducible mod 7
    for _ in range(100):
        a, b = F7(rng.randrange(7)), F7(rng.randrange(7))
        assert embed(a + b) == embed(a) + embed(b)
        assert embed(a * b) == embed(a) * embed(b)


def test_canonical_equality_is_congruence():
    rng = random.Random(1)
    F4 = GF(4)
    elems = list(enumerate_elements(F4))
    for _ in range(100):
        a = rng.choice(elems)
        c = rng.choice(elems)
        b = F4(list(a.rep))  # same value, fresh object
        d = F4(list(c.rep))
        assert a == b and c == d
        assert a + c == b + d and a * c == b * d and a - c == b - d


def test_regular_solution_examples():
    sol = regular_solution_search(F7, 2, 3, F7(0))
    assert tuple(x.rep for x in sol) == (1, 2, 3)
    sol = regular_solution_search(F5, 2, 2, F5(1))
    assert tuple(x.rep for x in sol) == (0, 1)
    sol = regular_solution_search(F7, 1, 2, F7(4))
    assert sum((x for x in sol), F7.zero()) == F7(4)
    assert sol[0] != sol[1]


def test_regular_solution_postconditions():
    for field, k, n, gamma in ((F7, 2, 3, 0), (F7, 2, 2, 3), (F5, 2, 2, 1),
                               (Field("prime", p=11), 2, 3, 1)):
        g = field(gamma)
        sol = regular_solution_search(field, k, n, g)
        powers = [x ** k for x in sol]
        total = field.zero()
        for p in powers:
            total = total + p
        assert total == g
        assert len({p.rep for p in powers}) == n
        zeros = sum(1 for x in sol if x.is_zero())
        assert zeros <= 1


def test_regular_solution_nonzero_flag():
    F11 = Field("prime", p=11)
    sol = regular_solution_search(F11, 2, 3, F11(1), require_nonzero=True)
    assert all(not x.is_zero() for x in sol)
    with pytest.raises(NotFound):
        regular_solution_search(F7, 2, 3, F7(1), require_nonzero=True)


def test_regular_solution_real_even_and_odd():
    R = Field("real", tolerance=1e-9)
    sol = regular_solution_search(R, 2, 3, R(1), require_nonzero=True)
    total = sum((x * x for x in sol), R.zero())
    assert abs(total.rep - 1) < 1e-9
    sol = regular_solution_search(R, 3, 2, R(-5))
    total = sum((x ** 3 for x in sol), R.zero())
    assert abs(total.rep + 5) < 1e-9


def test_field_spec_round_trip():
    for spec in ("Fp:7", "Fq:p=2,d=2,mod=[1,1,1]", "Q", "R:tol=1e-09", "C:tol=1e-09"):
        field = parse_field_spec(spec)
        assert parse_field_spec(field.spec_string()).key == field.key
    with pytest.raises(UsageError):
        parse_field_spec("Fp:6")
    with pytest.raises(UsageError):
        parse_field_spec("nonsense")


def test_kth_roots_complex_principal_and_all():
    C = Field("complex", tolerance=1e-9)
    e = C(complex(0, 8))
    (r,) = kth_roots(e, 3)
    assert abs((r ** 3).rep - 8j) < 1e-9
    roots = kth_roots(e, 3, all_roots=True)
    assert len(roots) == 3
    assert all(abs((z ** 3).rep - 8j) < 1e-8 for z in roots)


def test_kth_roots_real():
    R = Field("real", tolerance=1e-9)
    assert [round(r.rep, 9) for r in kth_roots(R(9), 2)] == [3.0, -3.0]
    assert kth_roots(R(-9), 2) == []
    (r,) = kth_roots(R(-27), 3)
    assert abs(r.rep + 3) < 1e-9


def test_extend_unsupported_base():
    from wordmap.errors import UnsupportedBase
    R = Field("real", tolerance=1e-9)
    with pytest.raises(UnsupportedBase):
        extend(R, Poly(Q, [1, 0, 1]))


def test_extension_tower_over_f4():
    # extensions of extensions collapse to the right finite field
    import itertools
    from wordmap.factor import is_irreducible

    F4 = GF(4)
    for c0, c1 in itertools.product(list(enumerate_elements(F4)), repeat=2):
        p = Poly(F4, [c0, c1, F4.one()])
        if is_irreducible(p):
            break
    L, alpha, embed = extend(F4, p)
    assert L.cardinality == 16 and L.characteristic == 2
    assert len({x.rep for x in enumerate_elements(L)}) == 16
    lifted = Poly(L, [embed(c) for c in p.coeffs])
    assert lifted(alpha).is_zero()
    x = alpha + embed(F4.generator())
    roots = kth_roots(x * x, 2)
    assert roots and all(r * r == x * x for r in roots)
