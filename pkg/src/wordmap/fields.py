"""Coefficient fields: F_p, one-step extensions, Q, and approximate R/C.

A :class:`Field` instance owns the raw representation of its elements and a
set of raw arithmetic closures; :class:`FieldElement` is a thin wrapper that
overloads the operators.  Raw representations:

  prime      int in [0, p)
  ext        tuple of base raws, low degree first, fixed length d
  rationals  fractions.Fraction (always normalised)
  real       float
  complex    complex

Extensions are a single quotient step ``base[t]/(m)`` with ``base`` a prime
field (giving F_{p^d}) or Q.  Approximate kinds carry an explicit tolerance
used only when *comparing* values; every construction stays formula driven.

The field-spec grammar used by the CLI and the JSON formats:

  Fp:7    Fq:p=2,d=2,mod=[1,1,1]    Q    R:tol=1e-9    C:tol=1e-9
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from typing import Iterator, Optional

from .errors import (
    DescriptorMismatch,
    DivisionByZero,
    InfiniteField,
    NotFound,
    ReduciblePolynomial,
    Unsupported,
    UnsupportedBase,
    UsageError,
)

# Finite fields up to this cardinality get full power tables / scans.
SCAN_BOUND = 10**6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for 64-bit range
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """A value of a :class:`Field`; immutable and hashable."""

    __slots__ = ("field", "rep")

    def __init__(self, field: "Field", rep):
        self.field = field
        self.rep = rep

    def _coerced(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field.key == self.field.key:
                return other
            raise DescriptorMismatch(f"{self.field} vs {other.field}")
        return self.field(other)

    def __add__(self, other):
        other = self._coerced(other)
        return FieldElement(self.field, self.field._radd(self.rep, other.rep))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerced(other)
        return FieldElement(self.field, self.field._rsub(self.rep, other.rep))

    def __rsub__(self, other):
        return self._coerced(other).__sub__(self)

    def __mul__(self, other):
        other = self._coerced(other)
        return FieldElement(self.field, self.field._rmul(self.rep, other.rep))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerced(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerced(other).__truediv__(self)

    def __neg__(self):
        return FieldElement(self.field, self.field._rneg(self.rep))

    def __pow__(self, k: int):
        f = self.field
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(f, f._rpow(self.rep, k))

    def inverse(self) -> "FieldElement":
        # the tolerance governs comparisons; division only refuses exact zero
        if self.rep == self.field._zero_raw:
            raise DivisionByZero(f"inverse of zero in {self.field}")
        return FieldElement(self.field, self.field._rinv(self.rep))

    def is_zero(self) -> bool:
        return self.field.is_zero_raw(self.rep)

    def is_close(self, other) -> bool:
        """Equality up to the field tolerance (exact equality for exact kinds)."""
        other = self._coerced(other)
        return self.field.close_raw(self.rep, other.rep)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = self._coerced(other)
            except (DescriptorMismatch, UsageError, TypeError, ValueError):
                return NotImplemented
        elif other.field is not self.field and other.field.key != self.field.key:
            return False
        return self.rep == other.rep

    def __hash__(self):
        return hash((self.field.key, self.rep))

    def __repr__(self):
        return self.field.format_raw(self.rep)

    def sort_key(self):
        return self.field.sort_key_raw(self.rep)


class Field:
    """A coefficient field descriptor plus its raw arithmetic."""

    __slots__ = (
        "kind", "p", "degree", "modulus", "tolerance", "base", "key",
        "_radd", "_rsub", "_rmul", "_rneg", "_rinv", "_zero_raw", "_one_raw",
        "_zero", "_one", "_power_tables", "_nonresidue",
    )

    def __init__(self, kind: str, p: int = 0, modulus: tuple = (),
                 tolerance: float = 0.0, base: "Field" = None):
        self.kind = kind
        self.p = p
        self.base = base
        self.modulus = modulus
        self.tolerance = tolerance
        self._power_tables = {}
        self._nonresidue = None
        if kind == "prime":
            if not _is_prime(p):
                raise UsageError(f"{p} is not prime")
            self.degree = 1
            self.key = ("prime", p)
            self._zero_raw, self._one_raw = 0, 1
            self._radd = lambda a, b: (a + b) % p
            self._rsub = lambda a, b: (a - b) % p
            self._rmul = lambda a, b: (a * b) % p
            self._rneg = lambda a: (-a) % p
            self._rinv = lambda a: pow(a, p - 2, p)
        elif kind == "ext":
            if base is None or not (base.kind in ("prime", "rationals")
                                    or (base.kind == "ext" and base.is_finite)):
                raise UnsupportedBase(
                    "extensions are supported over finite fields and Q only")
            d = len(modulus) - 1
            if d < 1 or modulus[-1] != base._one_raw:
                raise UsageError("modulus must be monic of degree >= 1")
            self.degree = d
            self.p = base.p
            self.key = ("ext", base.key, modulus)
            self._zero_raw = (base._zero_raw,) * d
            self._one_raw = tuple(
                base._one_raw if i == 0 else base._zero_raw for i in range(d))
            self._install_ext_ops()
        elif kind == "rationals":
            self.degree = 1
            self.key = ("rationals",)
            self._zero_raw, self._one_raw = Fraction(0), Fraction(1)
            self._radd = lambda a, b: a + b
            self._rsub = lambda a, b: a - b
            self._rmul = lambda a, b: a * b
            self._rneg = lambda a: -a
            self._rinv = lambda a: 1 / a
        elif kind in ("real", "complex"):
            if tolerance <= 0:
                raise UsageError("approximate fields need tolerance > 0")
            self.degree = 1
            self.key = (kind, tolerance)
            cast = float if kind == "real" else complex
            self._zero_raw, self._one_raw = cast(0), cast(1)
            self._radd = lambda a, b: a + b
            self._rsub = lambda a, b: a - b
            self._rmul = lambda a, b: a * b
            self._rneg = lambda a: -a
            self._rinv = lambda a: 1 / a
        else:
            raise UsageError(f"unknown field kind {kind!r}")
        self._zero = FieldElement(self, self._zero_raw)
        self._one = FieldElement(self, self._one_raw)

    def _install_ext_ops(self):
        base, mod = self.base, self.modulus
        d = self.degree
        badd, bsub, bmul = base._radd, base._rsub, base._rmul
        bneg, binv = base._rneg, base._rinv
        bzero = base._zero_raw
        bis_zero = base.is_zero_raw
        # reduction table: t^(d+j) mod m for j = 0..d-2
        red = []
        cur = [bneg(c) for c in mod[:d]]
        red.append(tuple(cur))
        for _ in range(1, d - 1):
            lead = cur[d - 1]
            cur = [bzero] + cur[: d - 1]
            cur = [badd(c, bmul(lead, r)) for c, r in zip(cur, red[0])]
            red.append(tuple(cur))

        def radd(a, b):
            return tuple(badd(x, y) for x, y in zip(a, b))

        def rsub(a, b):
            return tuple(bsub(x, y) for x, y in zip(a, b))

        def rneg(a):
            return tuple(bneg(x) for x in a)

        def rmul(a, b):
            conv = [bzero] * (2 * d - 1)
            for i, ai in enumerate(a):
                if bis_zero(ai):
                    continue
                for j, bj in enumerate(b):
                    conv[i + j] = badd(conv[i + j], bmul(ai, bj))
            out = conv[:d]
            for j in range(d - 1):
                c = conv[d + j]
                if bis_zero(c):
                    continue
                rj = red[j]
                out = [badd(x, bmul(c, r)) for x, r in zip(out, rj)]
            return tuple(out)

        def rinv(a):
            # extended Euclid over base[t]; returns u with u*a = 1 mod m
            g, u = _list_gcdext(list(a), list(mod), base)
            if len(g) != 1:
                raise DivisionByZero("element is a zero divisor (reducible modulus?)")
            c = binv(g[0])
            out = [bmul(c, x) for x in u]
            out += [bzero] * (d - len(out))
            return tuple(out[:d])

        self._radd, self._rsub, self._rmul = radd, rsub, rmul
        self._rneg, self._rinv = rneg, rinv

    # -- basic raw helpers ------------------------------------------------

    def _rpow(self, a, k: int):
        result = self._one_raw
        base = a
        while k:
            if k & 1:
                result = self._rmul(result, base)
            base = self._rmul(base, base)
            k >>= 1
        return result

    def is_zero_raw(self, a) -> bool:
        if self.kind == "real":
            return abs(a) <= self.tolerance
        if self.kind == "complex":
            return abs(a) <= self.tolerance
        return a == self._zero_raw

    def close_raw(self, a, b) -> bool:
        if self.kind in ("real", "complex"):
            return abs(a - b) <= self.tolerance
        return a == b

    def abs_raw(self, a) -> float:
        """Magnitude used for pivot selection over approximate kinds."""
        return abs(a)

    def sort_key_raw(self, a):
        if self.kind == "complex":
            return (a.real, a.imag)
        if self.kind == "ext":
            return tuple(self.base.sort_key_raw(c) for c in a)
        return a

    def format_raw(self, a) -> str:
        if self.kind == "ext":
            return "[" + ",".join(self.base.format_raw(c) for c in a) + "]"
        return str(a)

    # -- properties -------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime" or (self.kind == "ext" and self.base.is_finite)

    @property
    def is_exact(self) -> bool:
        return self.kind not in ("real", "complex")

    @property
    def absolute_degree(self) -> int:
        """Total degree over the prime field (or over Q), through any tower."""
        if self.kind == "ext":
            return self.degree * self.base.absolute_degree
        return 1

    @property
    def cardinality(self) -> Optional[int]:
        if self.kind == "prime":
            return self.p
        if self.kind == "ext" and self.base.is_finite:
            return self.base.cardinality ** self.degree
        return None

    def zero(self) -> FieldElement:
        return self._zero

    def one(self) -> FieldElement:
        return self._one

    def element(self, raw) -> FieldElement:
        return FieldElement(self, raw)

    def __call__(self, value) -> FieldElement:
        """Coerce ints, fractions, floats, coefficient lists, or elements."""
        if isinstance(value, FieldElement):
            if value.field is self or value.field.key == self.key:
                return value
            raise DescriptorMismatch(f"cannot coerce {value.field} into {self}")
        if self.kind == "prime":
            return FieldElement(self, int(value) % self.p)
        if self.kind == "ext":
            if isinstance(value, (list, tuple)):
                coeffs = [self.base(v).rep for v in value]
                if len(coeffs) > self.degree:
                    raise UsageError("coefficient list longer than extension degree")
                coeffs += [self.base._zero_raw] * (self.degree - len(coeffs))
                return FieldElement(self, tuple(coeffs))
            return self.embed_base(self.base(value))
        if self.kind == "rationals":
            if isinstance(value, str):
                return FieldElement(self, Fraction(value))
            if isinstance(value, float):
                raise UsageError("refusing silent float -> Q coercion")
            return FieldElement(self, Fraction(value))
        if self.kind == "real":
            return FieldElement(self, float(value))
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return FieldElement(self, complex(float(value[0]), float(value[1])))
        return FieldElement(self, complex(value))

    def embed_base(self, x: FieldElement) -> FieldElement:
        """Embed a base-field element into this extension."""
        if self.kind != "ext":
            raise UsageError("embed_base only applies to extensions")
        rep = (x.rep,) + (self.base._zero_raw,) * (self.degree - 1)
        return FieldElement(self, rep)

    def generator(self) -> FieldElement:
        """The class of t in base[t]/(m)."""
        if self.kind != "ext":
            raise UsageError("generator only applies to extensions")
        bz, bo = self.base._zero_raw, self.base._one_raw
        rep = tuple(bo if i == 1 else bz for i in range(self.degree))
        return FieldElement(self, rep)

    def __eq__(self, other):
        return isinstance(other, Field) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return self.spec_string()

    def spec_string(self) -> str:
        if self.kind == "prime":
            return f"Fp:{self.p}"
        if self.kind == "ext":
            mod = ",".join(str(c) for c in self.modulus)
            if self.base.kind == "prime":
                return f"Fq:p={self.base.p},d={self.degree},mod=[{mod}]"
            if self.base.is_finite:
                return f"Ftower:card={self.cardinality}"
            return f"Qext:mod=[{mod}]"
        if self.kind == "rationals":
            return "Q"
        if self.kind == "real":
            return f"R:tol={self.tolerance:g}"
        return f"C:tol={self.tolerance:g}"

    # -- JSON entry round trip ---------------------------------------------

    def entry_to_json(self, x: FieldElement):
        if self.kind == "prime":
            return x.rep
        if self.kind == "ext":
            return [self.base.entry_to_json(self.base.element(c)) for c in x.rep]
        if self.kind == "rationals":
            return str(x.rep)
        if self.kind == "real":
            return x.rep
        return [x.rep.real, x.rep.imag]

    def entry_from_json(self, value) -> FieldElement:
        return self(value)


# ----------------------------------------------------------------------
# low-level coefficient-list polynomial helpers (used for ext inverses and
# the Rabin irreducibility check; public Poly lives in polynomials.py)
# ----------------------------------------------------------------------

def _list_trim(a, base):
    while a and base.is_zero_raw(a[-1]):
        a.pop()
    return a


def _list_divmod(a, b, base):
    a = _list_trim(list(a), base)
    b = _list_trim(list(b), base)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    db, da = len(b) - 1, len(a) - 1
    inv_lead = base._rinv(b[-1])
    q = [base._zero_raw] * max(0, da - db + 1)
    while len(a) - 1 >= db and a:
        c = base._rmul(a[-1], inv_lead)
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = base._rsub(a[shift + i], base._rmul(c, bc))
        _list_trim(a, base)
    return q, a


def _list_mul(a, b, base):
    if not a or not b:
        return []
    out = [base._zero_raw] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if base.is_zero_raw(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = base._radd(out[i + j], base._rmul(x, y))
    return _list_trim(out, base)


def _list_sub(a, b, base):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else base._zero_raw
        y = b[i] if i < len(b) else base._zero_raw
        out.append(base._rsub(x, y))
    return _list_trim(out, base)


def _list_gcdext(a, b, base):
    """Return (g, u) with g = gcd(a, b) and u*a = g (mod b)."""
    r0, r1 = _list_trim(list(a), base), _list_trim(list(b), base)
    u0, u1 = [base._one_raw], []
    while r1:
        q, r = _list_divmod(r0, r1, base)
        r0, r1 = r1, r
        u0, u1 = u1, _list_sub(u0, _list_mul(q, u1, base), base)
    return r0, u0


def _list_powmod(a, e: int, mod, base):
    result = [base._one_raw]
    cur = list(a)
    _, cur = _list_divmod(cur, mod, base) if len(cur) >= len(mod) else (None, cur)
    while e:
        if e & 1:
            result = _list_divmod(_list_mul(result, cur, base), mod, base)[1]
        cur = _list_divmod(_list_mul(cur, cur, base), mod, base)[1]
        e >>= 1
    return result


def _irreducible_over_prime(mod: tuple, base: Field) -> bool:
    """Rabin irreducibility test for a monic polynomial over a finite field."""
    d = len(mod) - 1
    if d == 1:
        return True
    q = base.cardinality
    x = [base._zero_raw, base._one_raw]
    # x^(q^d) == x mod m
    frob = _list_powmod(x, q ** d, list(mod), base)
    if _list_sub(frob, x, base):
        return False
    primes = set()
    n = d
    f = 2
    while f * f <= n:
        while n % f == 0:
            primes.add(f)
            n //= f
        f += 1
    if n > 1:
        primes.add(n)
    for t in primes:
        frob = _list_powmod(x, q ** (d // t), list(mod), base)
        g, _ = _list_gcdext(_list_sub(frob, x, base), list(mod), base)
        if len(g) - 1 != 0:
            return False
    return True


# ----------------------------------------------------------------------
# spec-level operations
# ----------------------------------------------------------------------

def arith(op: str, x: FieldElement, y: FieldElement = None) -> FieldElement:
    """Dispatch-style arithmetic entry point (the operators do the work)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    raise UsageError(f"unknown op {op!r}")


def enumerate_elements(field: Field) -> Iterator[FieldElement]:
    """Yield every element of a finite field once, in a deterministic order."""
    if field.kind == "prime":
        for i in range(field.p):
            yield FieldElement(field, i)
        return
    if field.kind == "ext" and field.base.is_finite:
        base_raws = [x.rep for x in enumerate_elements(field.base)]
        b, d = len(base_raws), field.degree
        for idx in range(b ** d):
            rep, k = [], idx
            for _ in range(d):
                rep.append(base_raws[k % b])
                k //= b
            yield FieldElement(field, tuple(rep))
        return
    raise InfiniteField(f"{field} is not finite")


def _power_table(field: Field, k: int) -> dict:
    """Map raw value v -> list of raw x with x^k = v (finite fields, scan scale)."""
    tab = field._power_tables.get(k)
    if tab is None:
        tab = {}
        for x in enumerate_elements(field):
            v = field._rpow(x.rep, k)
            tab.setdefault(v, []).append(x.rep)
        field._power_tables[k] = tab
    return tab


def _sqrt_odd_finite(field: Field, e: FieldElement) -> FieldElement:
    """Tonelli-Shanks square root; e must be a nonzero quadratic residue."""
    q = field.cardinality
    s, r = q - 1, 0
    while s % 2 == 0:
        s //= 2
        r += 1
    z = field._nonresidue
    if z is None:
        for cand in enumerate_elements(field):
            if cand.is_zero():
                continue
            if field._rpow(cand.rep, (q - 1) // 2) != field._one_raw:
                z = cand
                break
        field._nonresidue = z
    m = r
    c = z ** s
    t = e ** s
    x = e ** ((s + 1) // 2)
    one = field.one()
    while t != one:
        # find least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != one:
            t2 = t2 * t2
            i += 1
        b = c ** (2 ** (m - i - 1))
        m, c = i, b * b
        t = t * c
        x = x * b
    return x


def _integer_kth_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def kth_roots(e: FieldElement, k: int, all_roots: bool = False) -> list:
    """All x with x^k = e (finite fields, Q); real roots over R; principal
    root over C unless ``all_roots``.  Empty list when none exist."""
    if k < 1:
        raise UsageError("k must be >= 1")
    field = e.field
    if k == 1:
        return [e]
    if field.is_finite:
        q = field.cardinality
        if e.is_zero():
            return [field.zero()]
        if q <= SCAN_BOUND:
            tab = _power_table(field, k)
            return [field.element(r) for r in tab.get(e.rep, [])]
        g = math.gcd(k, q - 1)
        if g == 1:
            einv = pow(k % (q - 1), -1, q - 1)
            return [e ** einv]
        if k == 2:
            if field._rpow(e.rep, (q - 1) // 2) != field._one_raw:
                return []
            r = _sqrt_odd_finite(field, e)
            return [r, -r]
        raise Unsupported(
            f"k-th roots with gcd(k, q-1) = {g} > 1 beyond the scan bound")
    if field.kind == "ext":
        # number field Q(alpha): only the trivial root is recognised
        if field.is_zero_raw(e.rep):
            return [field.zero()]
        raise Unsupported("k-th roots in number fields are not supported")
    if field.kind == "rationals":
        fr: Fraction = e.rep
        if fr == 0:
            return [field.zero()]
        num, den = fr.numerator, fr.denominator
        neg = num < 0
        if neg and k % 2 == 0:
            return []
        rn = _integer_kth_root(abs(num), k)
        rd = _integer_kth_root(den, k)
        if rn is None or rd is None:
            return []
        root = Fraction(-rn if neg else rn, rd)
        roots = [field.element(root)]
        if k % 2 == 0 and root != 0:
            roots.append(field.element(-root))
        return roots
    if field.kind == "real":
        v = e.rep
        if abs(v) <= field.tolerance:
            return [field.zero()]
        if k % 2 == 1:
            r = math.copysign(abs(v) ** (1.0 / k), v)
            return [field.element(r)]
        if v < 0:
            return []
        r = v ** (1.0 / k)
        return [field.element(r), field.element(-r)]
    # complex
    v = e.rep
    if abs(v) <= field.tolerance:
        return [field.zero()]
    principal = v ** (1.0 / k) if v.imag == 0 and v.real > 0 else cmath.exp(cmath.log(v) / k)
    if not all_roots:
        return [field.element(principal)]
    zeta = cmath.exp(2j * cmath.pi / k)
    return [field.element(principal * zeta ** i) for i in range(k)]


def extend(base: Field, modulus) -> tuple:
    """Quotient extension base[t]/(p).  Returns (field, generator, embed)."""
    from .polynomials import Poly  # deferred: polynomials imports this module

    if not (base.is_finite or base.kind == "rationals"):
        raise UnsupportedBase(f"cannot extend {base}")
    if isinstance(modulus, Poly):
        if modulus.field.key != base.key:
            raise DescriptorMismatch("modulus must live over the base field")
        coeffs = tuple(c.rep for c in modulus.coeffs)
    else:
        coeffs = tuple(base(c).rep for c in modulus)
    if len(coeffs) < 2 or coeffs[-1] != base._one_raw:
        raise UsageError("modulus must be monic of degree >= 1")
    if base.is_finite:
        if not _irreducible_over_prime(coeffs, base):
            raise ReduciblePolynomial(
                f"modulus {list(coeffs)} factors over GF({base.cardinality})")
    else:
        from .factor import q_irreducibility_status

        status = q_irreducibility_status(Poly(base, coeffs))
        if status == "reducible":
            raise ReduciblePolynomial(f"modulus {list(coeffs)} factors over Q")
    field = Field("ext", modulus=coeffs, base=base)
    return field, field.generator(), field.embed_base


def regular_solution_search(field: Field, k: int, n: int, gamma: FieldElement,
                            require_nonzero: bool = False):
    """First tuple (l_1..l_n) with sum l_i^k = gamma and pairwise distinct
    k-th powers, in deterministic order.  Raises NotFound when exhausted."""
    for sol in regular_solution_iter(field, k, n, gamma, require_nonzero):
        return sol
    raise NotFound(
        f"no {'non-zero ' if require_nonzero else ''}regular solution of "
        f"sum of {n} {k}-th powers = {gamma!r} over {field}")


def regular_solution_iter(field: Field, k: int, n: int, gamma: FieldElement,
                          require_nonzero: bool = False) -> Iterator[tuple]:
    gamma = field(gamma)
    if n < 1:
        raise UsageError("n must be >= 1")
    if field.is_finite:
        yield from _regular_iter_finite(field, k, n, gamma, require_nonzero)
        return
    if field.kind in ("real", "complex"):
        sol = _regular_construct_analytic(field, k, n, gamma, require_nonzero)
        if sol is not None:
            yield sol
        return
    # Q: bounded small search; large-field existence guarantees do not cover Q
    yield from _regular_iter_candidates(
        field, k, n, gamma, require_nonzero,
        [field(v) for v in (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8)])


def _regular_iter_finite(field, k, n, gamma, require_nonzero):
    yield from _regular_iter_candidates(
        field, k, n, gamma, require_nonzero, list(enumerate_elements(field)))


def _regular_iter_candidates(field, k, n, gamma, require_nonzero, candidates):
    def close(total, used):
        """Pick the last coordinate by a k-th root."""
        want = gamma - total
        try:
            roots = kth_roots(field.element(want.rep), k)
        except Unsupported:
            roots = []
        for r in roots:
            if require_nonzero and r.is_zero():
                continue
            if want.rep in used:
                return None
            return r
        return None

    def rec(prefix, total, used):
        if len(prefix) == n - 1:
            last = close(total, used)
            if last is not None:
                yield tuple(prefix) + (last,)
            return
        for cand in candidates:
            if require_nonzero and cand.is_zero():
                continue
            p = cand ** k
            if p.rep in used:
                continue
            used.add(p.rep)
            yield from rec(prefix + [cand], total + p, used)
            used.discard(p.rep)

    if n == 1:
        last = close(field.zero(), set())
        if last is not None:
            yield (last,)
        return
    yield from rec([], field.zero(), set())


def _regular_construct_analytic(field, k, n, gamma, require_nonzero):
    """Direct construction over R/C: distinct k-th powers summing to gamma."""
    one = field.one()
    if field.kind == "complex":
        for shift in range(64):
            powers = [field(complex(i + 1 + shift * 0.5, 0.25)) for i in range(n - 1)]
            last = gamma - sum(powers, field.zero())
            vals = [p.rep for p in powers]
            if any(abs(last.rep - v) <= field.tolerance for v in vals):
                continue
            if require_nonzero and abs(last.rep) <= field.tolerance:
                continue
            powers.append(last)
            return tuple(kth_roots(p, k)[0] for p in powers)
        return None
    # real field
    if k % 2 == 1 or k == 1:
        for scale in (1.0, 0.5, 0.25, 2.0, 0.125):
            powers = [field((i + 1) * scale) for i in range(n - 1)]
            last = gamma - sum(powers, field.zero())
            vals = [p.rep for p in powers]
            if any(abs(last.rep - v) <= field.tolerance for v in vals):
                continue
            if require_nonzero and abs(last.rep) <= field.tolerance:
                continue
            powers.append(last)
            return tuple(kth_roots(p, k)[0] for p in powers)
        return None
    # k even: powers must be distinct non-negatives summing to gamma
    g = gamma.rep
    if n == 1:
        if g < 0:
            return None
        if require_nonzero and g <= field.tolerance:
            return None
        return (kth_roots(gamma, k)[0],)
    if g <= field.tolerance:
        return None
    weights = [i + 1 for i in range(n)]
    tot = sum(weights)
    powers = [field(g * w / tot) for w in weights]
    return tuple(kth_roots(p, k)[0] for p in powers)


# ----------------------------------------------------------------------
# field-spec grammar
# ----------------------------------------------------------------------

def parse_field_spec(spec: str) -> Field:
    spec = spec.strip()
    if spec == "Q":
        return Field("rationals")
    if spec.startswith("Fp:"):
        try:
            p = int(spec[3:])
        except ValueError as exc:
            raise UsageError(f"bad prime in field spec {spec!r}") from exc
        return Field("prime", p=p)
    if spec.startswith("Fq:"):
        parts = dict()
        body = spec[3:]
        # mod=[...] may contain commas; extract it first
        if "mod=[" not in body:
            raise UsageError(f"field spec {spec!r} needs mod=[...]")
        head, mod_part = body.split("mod=[", 1)
        if not mod_part.endswith("]"):
            raise UsageError(f"field spec {spec!r}: unterminated mod list")
        mod = tuple(int(c) for c in mod_part[:-1].split(","))
        for item in head.strip(",").split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            parts[key] = val
        try:
            p, d = int(parts["p"]), int(parts["d"])
        except (KeyError, ValueError) as exc:
            raise UsageError(f"field spec {spec!r} needs p= and d=") from exc
        if len(mod) != d + 1:
            raise UsageError(f"mod list must have degree d = {d}")
        base = Field("prime", p=p)
        modulus = tuple(c % p for c in mod)
        if not _irreducible_over_prime(modulus, base):
            raise ReduciblePolynomial(f"mod {list(mod)} is reducible over F_{p}")
        return Field("ext", modulus=modulus, base=base)
    for prefix, kind in (("R", "real"), ("C", "complex")):
        if spec == prefix:
            return Field(kind, tolerance=1e-9)
        if spec.startswith(prefix + ":tol="):
            try:
                tol = float(spec[len(prefix) + 5:])
            except ValueError as exc:
                raise UsageError(f"bad tolerance in {spec!r}") from exc
            return Field(kind, tolerance=tol)
    raise UsageError(f"cannot parse field spec {spec!r}")


def GF(q: int, modulus=None) -> Field:
    """Convenience constructor for small finite fields by cardinality."""
    if _is_prime(q):
        return Field("prime", p=q)
    for p in range(2, q):
        if _is_prime(p):
            d = 0
            n = q
            while n % p == 0:
                n //= p
                d += 1
            if n == 1:
                base = Field("prime", p=p)
                if modulus is not None:
                    return Field("ext", modulus=tuple(c % p for c in modulus), base=base)
                for cand in _monic_polys(p, d):
                    if _irreducible_over_prime(cand, base):
                        return Field("ext", modulus=cand, base=base)
    raise UsageError(f"{q} is not a prime power")


def _monic_polys(p: int, d: int) -> Iterator[tuple]:
    for tail in itertools.product(range(p), repeat=d):
        yield tuple(tail) + (1,)


RATIONALS = Field("rationals")
