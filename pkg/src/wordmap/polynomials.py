"""Univariate polynomials over a Field.

Coefficients are stored low degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple.  Evaluation accepts anything with
ring operations (field elements and square matrices), so ``p(A)`` works.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import DescriptorMismatch, DivisionByZero, UsageError, ZeroPolynomial
from .fields import Field, FieldElement


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence = ()):
        elems = [field(c) for c in coeffs]
        while elems and elems[-1].is_zero():
            elems.pop()
        self.field = field
        self.coeffs = tuple(elems)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(field: Field) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field: Field) -> "Poly":
        return Poly(field, (field.one(),))

    @staticmethod
    def x(field: Field) -> "Poly":
        return Poly(field, (field.zero(), field.one()))

    @staticmethod
    def constant(c: FieldElement) -> "Poly":
        return Poly(c.field, (c,))

    @staticmethod
    def from_roots(field: Field, roots) -> "Poly":
        out = Poly.one(field)
        x = Poly.x(field)
        for r in roots:
            out = out * (x - Poly.constant(field(r)))
        return out

    # -- inspection ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def leading(self) -> FieldElement:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field.key == self.field.key
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.field.key, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(f"{c!r}")
            elif i == 1:
                parts.append(f"{c!r}*T")
            else:
                parts.append(f"{c!r}*T^{i}")
        return " + ".join(reversed(parts))

    def sort_key(self):
        return (self.degree, tuple(c.sort_key() for c in self.coeffs))

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Poly"):
        if other.field.key != self.field.key:
            raise DescriptorMismatch("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def scale(self, c: FieldElement) -> "Poly":
        c = self.field(c)
        return Poly(self.field, [a * c for a in self.coeffs])

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise UsageError("negative polynomial power")
        result = Poly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple:
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        field = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.leading().inverse()
        if len(rem) - 1 < db:
            return Poly.zero(field), self
        quot = [field.zero()] * (len(rem) - db)
        while len(rem) - 1 >= db and rem:
            c = rem[-1] * inv_lead
            shift = len(rem) - 1 - db
            quot[shift] = c
            for i, bc in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * bc
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(field, quot), Poly(field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalise the zero polynomial")
        return self.scale(self.leading().inverse())

    def derivative(self) -> "Poly":
        field = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            mult = field(i)
            out.append(self.coeffs[i] * mult)
        return Poly(field, out)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        return ((self * other) // self.gcd(other)).monic()

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.one(self.field) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; x may be a FieldElement or a square Matrix."""
        if isinstance(x, FieldElement):
            acc = self.field.zero()
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        # matrix argument
        from .matrices import Matrix

        if not isinstance(x, Matrix):
            raise UsageError(f"cannot evaluate polynomial at {type(x)!r}")
        n = x.nrows
        acc = Matrix.zeros(x.field, n, n)
        for c in reversed(self.coeffs):
            acc = acc * x + Matrix.identity(x.field, n).scale(c)
        return acc

    def shift_compose_linear(self, a: FieldElement, b: FieldElement) -> "Poly":
        """p(a*T + b), used in tests and root transforms."""
        field = self.field
        lin = Poly(field, (b, a))
        acc = Poly.zero(field)
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly.constant(c)
        return acc


def approx_roots(p: Poly, iterations: int = 400) -> list:
    """All complex roots of a real/complex-coefficient polynomial by the
    Durand-Kerner iteration.  Desk-scale degrees only."""
    if p.degree < 1:
        return []
    coeffs = [complex(c.rep) for c in p.coeffs]
    lead = coeffs[-1]
    coeffs = [c / lead for c in coeffs]
    n = len(coeffs) - 1
    scale = 1.0 + max(abs(c) for c in coeffs[:-1])
    roots = [(0.4 + 0.9j) ** k * scale for k in range(1, n + 1)]

    def ev(z):
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    for _ in range(iterations):
        moved = 0.0
        new = []
        for i, z in enumerate(roots):
            denom = 1.0 + 0j
            for j, w in enumerate(roots):
                if i != j:
                    denom *= (z - w)
            if denom == 0:
                denom = 1e-30
            step = ev(z) / denom
            new.append(z - step)
            moved = max(moved, abs(step))
        roots = new
        if moved < 1e-14 * scale:
            break
    return roots
