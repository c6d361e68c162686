"""Word specifications, evaluation, and the witness record.

Grammar used by the CLI and JSON formats:

  comm:m=4                      product of m/2 commutators (m even)
  diag:d=1,k=2;d=3,k=5          diagonal word sum(d_i * X_i^{k_i})

Deltas are parsed as field literals: integers, a/b fractions, floats, or
pipe-separated coefficient lists for extension fields (d=[1|0|1]).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import UsageError, VerificationFailed
from .fields import Field, FieldElement
from .matrices import Matrix


@dataclass(frozen=True)
class CommutatorProduct:
    """[X1,X2][X3,X4]...[X_{m-1},X_m]."""

    m: int

    def __post_init__(self):
        if self.m < 2 or self.m % 2:
            raise UsageError("commutator products need an even m >= 2")

    @property
    def arity(self) -> int:
        return self.m

    def spec_string(self) -> str:
        return f"comm:m={self.m}"


@dataclass(frozen=True)
class DiagonalWord:
    """delta_1 X_1^{k_1} + ... + delta_m X_m^{k_m} with all deltas nonzero."""

    terms: Tuple[Tuple[FieldElement, int], ...]

    def __post_init__(self):
        if not self.terms:
            raise UsageError("diagonal words need at least one term")
        for delta, k in self.terms:
            if delta.is_zero():
                raise UsageError("diagonal word coefficients must be nonzero")
            if k < 1:
                raise UsageError("diagonal word exponents must be >= 1")

    @property
    def arity(self) -> int:
        return len(self.terms)

    @property
    def exponents(self) -> tuple:
        return tuple(k for _, k in self.terms)

    def spec_string(self) -> str:
        return "diag:" + ";".join(f"d={delta!r},k={k}" for delta, k in self.terms)


def eval_word(word, mats) -> Matrix:
    mats = list(mats)
    if len(mats) != word.arity:
        raise UsageError(f"word takes {word.arity} matrices, got {len(mats)}")
    if isinstance(word, CommutatorProduct):
        out = None
        for i in range(0, word.m, 2):
            x, y = mats[i], mats[i + 1]
            c = x * y - y * x
            out = c if out is None else out * c
        return out
    if isinstance(word, DiagonalWord):
        out = None
        for (delta, k), x in zip(word.terms, mats):
            term = (x ** k).scale(delta)
            out = term if out is None else out + term
        return out
    raise UsageError(f"unknown word {word!r}")


def parse_word(spec: str, field: Field):
    spec = spec.strip()
    if spec.startswith("comm:"):
        body = spec[5:]
        if not body.startswith("m="):
            raise UsageError(f"bad commutator word spec {spec!r}")
        try:
            m = int(body[2:])
        except ValueError as exc:
            raise UsageError(f"bad m in {spec!r}") from exc
        return CommutatorProduct(m)
    if spec.startswith("diag:"):
        terms = []
        for item in spec[5:].split(";"):
            item = item.strip()
            if not item:
                continue
            parts = dict()
            for kv in item.split(","):
                key, _, val = kv.partition("=")
                parts[key.strip()] = val.strip()
            if "d" not in parts or "k" not in parts:
                raise UsageError(f"diagonal term {item!r} needs d= and k=")
            delta = _parse_literal(parts["d"], field)
            try:
                k = int(parts["k"])
            except ValueError as exc:
                raise UsageError(f"bad exponent in {item!r}") from exc
            terms.append((delta, k))
        return DiagonalWord(tuple(terms))
    raise UsageError(f"cannot parse word spec {spec!r}")


def _parse_literal(text: str, field: Field) -> FieldElement:
    text = text.strip()
    if field.kind == "rationals":
        return field(text)
    if field.kind in ("real", "complex"):
        return field(float(text))
    if field.kind == "ext" and text.startswith("["):
        coeffs = [int(v) for v in text.strip("[]").split("|")]
        return field(coeffs)
    return field(int(text))


@dataclass(frozen=True)
class Witness:
    """A verified solution tuple for ``word`` evaluated against ``target``."""

    word: object
    target: Matrix
    matrices: Tuple[Matrix, ...]
    conjugators: Tuple[Matrix, ...] = ()
    diagonalizable_flags: Optional[Tuple[bool, ...]] = None

    @property
    def verified(self) -> bool:
        return True  # construction refuses to emit unverified witnesses

    def reverify(self) -> bool:
        return eval_word(self.word, self.matrices).allclose(self.target)


def make_witness(word, target: Matrix, mats, conjugators=(), flags=None) -> Witness:
    """The single gate every solver returns through: re-evaluate and compare."""
    got = eval_word(word, mats)
    if not got.allclose(target):
        raise VerificationFailed(
            f"witness evaluation mismatch for {getattr(word, 'spec_string', lambda: word)()}")
    return Witness(word, target, tuple(mats), tuple(conjugators), flags)
