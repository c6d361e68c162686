"""Univariate polynomial factorization.

Finite fields get the full pipeline: squarefree decomposition (with p-th
root extraction in characteristic p), distinct-degree splitting, then
Cantor-Zassenhaus equal-degree splitting.  The equal-degree step is
randomised with an explicit seed; in characteristic 2 it uses the additive
trace map since the multiplicative variant degenerates there.

Over Q only content removal, rational-root extraction, and quadratic/cubic
splits are performed.  A residual factor of degree >= 4 with no rational
root is returned whole with ``certified=False``; downstream code treats it
as irreducible and final witnesses are verified unconditionally anyway.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedField, ZeroPolynomial
from .fields import Field, FieldElement
from .polynomials import Poly


@dataclass(frozen=True)
class FactorTerm:
    poly: Poly
    multiplicity: int
    certified: bool = True


@dataclass(frozen=True)
class Factorization:
    unit: FieldElement
    factors: tuple

    def expand(self) -> Poly:
        out = Poly.constant(self.unit)
        for term in self.factors:
            out = out * term.poly ** term.multiplicity
        return out

    def __iter__(self):
        return iter(self.factors)


def factor(f: Poly, seed: int = 0) -> Factorization:
    """Factor f into monic irreducibles times a unit (see module docstring)."""
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    field = f.field
    if field.is_finite:
        terms = _factor_finite(f, seed)
    elif field.kind == "rationals":
        terms = _factor_rationals(f)
    else:
        raise UnsupportedField(f"factorization over {field} is not supported")
    unit = f.leading()
    terms.sort(key=lambda t: t.poly.sort_key())
    fac = Factorization(unit, tuple(terms))
    if fac.expand() != f:
        raise AssertionError("factorization does not reproduce its input")
    return fac


def is_separable(f: Poly) -> bool:
    """True iff every irreducible factor g has gcd(g, g') = 1.  All supported
    exact fields are perfect, so this is always true there; the check is kept
    explicit for the guard paths."""
    if f.is_zero():
        raise ZeroPolynomial("separability of the zero polynomial")
    if f.field.kind in ("real", "complex"):
        return True
    for term in factor(f):
        g = term.poly
        if g.degree >= 1 and g.gcd(g.derivative()).degree != 0:
            return False
    return True


def is_irreducible(f: Poly, seed: int = 0) -> bool:
    if f.degree < 1:
        return False
    fac = factor(f, seed)
    return len(fac.factors) == 1 and fac.factors[0].multiplicity == 1


def q_irreducibility_status(f: Poly) -> str:
    """'irreducible', 'reducible', or 'unverified' for a monic poly over Q."""
    fac = factor(f)
    if len(fac.factors) != 1 or fac.factors[0].multiplicity != 1:
        return "reducible"
    return "irreducible" if fac.factors[0].certified else "unverified"


# ----------------------------------------------------------------------
# finite fields
# ----------------------------------------------------------------------

def _factor_finite(f: Poly, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for g, mult in _squarefree_decomposition(f.monic()):
        for h in _squarefree_factor(g, rng):
            out.append(FactorTerm(h, mult))
    return out


def _pth_root_poly(f: Poly) -> Poly:
    """For f(x) = g(x^p) over F_{p^d}, return g with the coefficients' p-th
    roots (Frobenius inverse: c -> c^(p^(d-1)))."""
    field = f.field
    p = field.characteristic
    root_exp = p ** (field.absolute_degree - 1)
    coeffs = []
    for i in range(0, f.degree + 1, p):
        coeffs.append(f[i] ** root_exp)
    return Poly(field, coeffs)


def _squarefree_decomposition(f: Poly) -> list:
    """Monic f -> list of (squarefree g_i, multiplicity m_i), char-p aware."""
    p = f.field.characteristic
    out = []
    if f.degree < 1:
        return out

    def rec(g: Poly, outer: int):
        if g.degree < 1:
            return
        dg = g.derivative()
        if dg.is_zero():
            rec(_pth_root_poly(g), outer * p)
            return
        c = g.gcd(dg)
        w = g // c
        m = 1
        while w.degree >= 1:
            y = w.gcd(c)
            piece = w // y
            if piece.degree >= 1:
                out.append((piece.monic(), m * outer))
            w = y
            c = c // y
            m += 1
        if c.degree >= 1:
            # what survives is exactly the p-th power part
            rec(_pth_root_poly(c), outer * p)

    rec(f, 1)
    return out


def _squarefree_factor(f: Poly, rng: random.Random) -> list:
    """Factor a monic squarefree polynomial over a finite field."""
    out = []
    for g, d in _distinct_degree(f):
        out.extend(_equal_degree(g, d, rng))
    return out


def _distinct_degree(f: Poly) -> list:
    field = f.field
    q = field.cardinality
    x = Poly.x(field)
    out = []
    h = x
    g = f
    d = 0
    while g.degree > 0:
        d += 1
        if 2 * d > g.degree:
            out.append((g, g.degree))
            break
        h = h.pow_mod(q, g)
        gd = g.gcd(h - x)
        if gd.degree > 0:
            out.append((gd, d))
            g = g // gd
            h = h % g
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list:
    """Split a product of distinct irreducibles all of degree d."""
    field = f.field
    if f.degree == d:
        return [f.monic()]
    q = field.cardinality
    p = field.characteristic
    one = Poly.one(field)
    while True:
        a = Poly(field, [field.element(_random_raw(field, rng)) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        if p == 2:
            # additive trace map over F_2
            t = a % f
            b = t
            steps = d * field.absolute_degree - 1
            for _ in range(steps):
                t = t.pow_mod(2, f)
                b = (b + t) % f
        else:
            b = a.pow_mod((q ** d - 1) // 2, f) - one
        g = f.gcd(b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree((f // g).monic(), d, rng)


def _random_raw(field: Field, rng: random.Random):
    if field.kind == "prime":
        return rng.randrange(field.p)
    return tuple(_random_raw(field.base, rng) for _ in range(field.degree))


# ----------------------------------------------------------------------
# rationals
# ----------------------------------------------------------------------

def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _rational_roots(f: Poly) -> list:
    """All rational roots of f (integer-cleared), each listed once."""
    field = f.field
    denom = 1
    for c in f.coeffs:
        denom = denom * c.rep.denominator // math.gcd(denom, c.rep.denominator)
    ints = [int(c.rep * denom) for c in f.coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]  # x | f: root 0 handled by caller loop via evaluation
    if not ints:
        return []
    a0, an = ints[0], ints[-1]
    roots = []
    seen = set()
    candidates = [Fraction(0)]
    for pnum in _divisors(a0):
        for pden in _divisors(an):
            candidates.append(Fraction(pnum, pden))
            candidates.append(Fraction(-pnum, pden))
    for cand in candidates:
        if cand in seen:
            continue
        seen.add(cand)
        if f(field(cand)).is_zero():
            roots.append(cand)
    return roots


def _factor_rationals(f: Poly) -> list:
    field = f.field
    work = f.monic()
    out = []
    x = Poly.x(field)
    # strip rational roots (with multiplicity)
    while work.degree >= 1:
        roots = _rational_roots(work)
        if not roots:
            break
        for r in sorted(roots):
            lin = x - Poly.constant(field(r))
            mult = 0
            while (work % lin).is_zero():
                work = work // lin
                mult += 1
            out.append(FactorTerm(lin, mult))
    if work.degree == 0:
        return out
    if work.degree in (2, 3):
        # no rational root at this point -> irreducible over Q
        out.append(FactorTerm(work.monic(), 1))
        return out
    # try to peel perfect powers apart cheaply via squarefree structure
    dg = work.derivative()
    g = work.gcd(dg)
    if g.degree >= 1:
        inner = work // g
        mult = 0
        probe = work
        while (probe % inner).is_zero():
            probe = probe // inner
            mult += 1
        if probe.degree == 0 and mult >= 1 and inner.degree < work.degree:
            for term in _factor_rationals(inner):
                out.append(FactorTerm(term.poly, term.multiplicity * mult, term.certified))
            return out
    certified = work.degree < 4
    out.append(FactorTerm(work.monic(), 1, certified))
    return out
