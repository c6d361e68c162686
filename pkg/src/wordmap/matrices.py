"""Dense matrices over a Field, plus the exact decompositions the solvers
need: Berkowitz characteristic polynomials, Krylov minimal polynomials,
nullspaces, similarity solving, nilpotent Jordan structure, the generalized
Jordan form with companion blocks, and the companion-lift homomorphism that
carries extension-field witnesses back to the base field.

Conventions.  The companion matrix of p(x) = x^n + a_{n-1}x^{n-1} + ... + a_0
has subdiagonal ones and last column (-a_0, ..., -a_{n-1}).  J_{p,l} is the
l*d x l*d block matrix with companion diagonal blocks and identity
superdiagonal blocks; J_{alpha,l} is the d = 1 case (scalar Jordan block,
superdiagonal ones).  Nilpotent partitions are reported weakly increasing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .errors import (
    DescriptorMismatch,
    FactorizationUnavailable,
    InseparableCharPoly,
    NonSquare,
    NotNilpotent,
    NotSimilar,
    SingularMatrix,
    UsageError,
    VerificationFailed,
)
from .fields import Field, FieldElement
from .polynomials import Poly, approx_roots


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence[FieldElement]]):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(field: Field, rows) -> "Matrix":
        return Matrix(field, [[field(x) for x in row] for row in rows])

    @staticmethod
    def zeros(field: Field, nrows: int, ncols: int = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        z = field.zero()
        return Matrix(field, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def unit(field: Field, n: int, i: int, j: int) -> "Matrix":
        """e_{i,j}: single 1 at 0-indexed position (i, j)."""
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if (r, c) == (i, j) else z for c in range(n)]
                              for r in range(n)])

    @staticmethod
    def diagonal(field: Field, entries) -> "Matrix":
        entries = [field(e) for e in entries]
        z = field.zero()
        n = len(entries)
        return Matrix(field, [[entries[i] if i == j else z for j in range(n)]
                              for i in range(n)])

    @staticmethod
    def companion(p: Poly) -> "Matrix":
        if not p.is_monic() or p.degree < 1:
            raise UsageError("companion matrix needs a monic polynomial of degree >= 1")
        field = p.field
        n = p.degree
        z, o = field.zero(), field.one()
        rows = [[z] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = o
        for i in range(n):
            rows[i][n - 1] = -p[i]
        return Matrix(field, rows)

    @staticmethod
    def jordan_block(alpha: FieldElement, l: int) -> "Matrix":
        """J_{alpha,l}: alpha on the diagonal, ones on the superdiagonal."""
        field = alpha.field
        z, o = field.zero(), field.one()
        rows = [[z] * l for _ in range(l)]
        for i in range(l):
            rows[i][i] = alpha
            if i + 1 < l:
                rows[i][i + 1] = o
        return Matrix(field, rows)

    @staticmethod
    def generalized_jordan_block(p: Poly, l: int) -> "Matrix":
        """J_{p,l}: l companion blocks of p with identity superblocks."""
        field = p.field
        d = p.degree
        C = Matrix.companion(p)
        n = l * d
        z, o = field.zero(), field.one()
        rows = [[z] * n for _ in range(n)]
        for b in range(l):
            for i in range(d):
                for j in range(d):
                    rows[b * d + i][b * d + j] = C.rows[i][j]
            if b + 1 < l:
                for i in range(d):
                    rows[b * d + i][(b + 1) * d + i] = o
        return Matrix(field, rows)

    @staticmethod
    def block_diag(field: Field, mats: Iterable["Matrix"]) -> "Matrix":
        mats = list(mats)
        n = sum(m.nrows for m in mats)
        z = field.zero()
        rows = [[z] * n for _ in range(n)]
        off = 0
        for m in mats:
            for i in range(m.nrows):
                for j in range(m.ncols):
                    rows[off + i][off + j] = m.rows[i][j]
            off += m.nrows
        return Matrix(field, rows)

    @staticmethod
    def cyclic_shift(field: Field, n: int) -> "Matrix":
        """Superdiagonal ones plus a 1 in the bottom-left corner."""
        z, o = field.zero(), field.one()
        rows = [[z] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = o
        rows[n - 1][0] = o
        return Matrix(field, rows)

    @staticmethod
    def permutation(field: Field, order: Sequence[int]) -> "Matrix":
        """P with P e_{order[t]} = e_t, i.e. (P A P^-1)[t][u] = A[order[t]][order[u]]."""
        n = len(order)
        z, o = field.zero(), field.one()
        rows = [[z] * n for _ in range(n)]
        for t, src in enumerate(order):
            rows[t][src] = o
        return Matrix(field, rows)

    @staticmethod
    def from_cols(field: Field, cols) -> "Matrix":
        n = len(cols[0])
        return Matrix(field, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- basics ---------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def cols(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def _check(self, other: "Matrix"):
        if other.field.key != self.field.key:
            raise DescriptorMismatch("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, [[a + b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, [[a - b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in row] for row in self.rows])

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, [[a * c for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        self._check(other)
        if self.ncols != other.nrows:
            raise UsageError("matrix dimensions do not match")
        bcols = other.cols()
        zero = self.field.zero()
        out = []
        for row in self.rows:
            out_row = []
            for colv in bcols:
                acc = zero
                for a, b in zip(row, colv):
                    if not a.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(self.field, out)

    def __pow__(self, k: int) -> "Matrix":
        _require_square(self)
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.col(j) for j in range(self.ncols)])

    def trace(self) -> FieldElement:
        _require_square(self)
        acc = self.field.zero()
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.rows for a in row)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and other.field.key == self.field.key
                and other.rows == self.rows)

    def __hash__(self):
        return hash((self.field.key, self.rows))

    def allclose(self, other: "Matrix") -> bool:
        """Entrywise equality, up to the field tolerance for approximate kinds."""
        self._check(other)
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(a.is_close(b) for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def __repr__(self):
        body = "; ".join(" ".join(repr(a) for a in row) for row in self.rows)
        return f"[{body}]"

    def conjugate_by(self, P: "Matrix") -> "Matrix":
        """P * self * P^-1."""
        return P * self * P.inverse()

    # -- elimination ---------------------------------------------------------

    def rank(self) -> int:
        _, pivots = _row_echelon([list(r) for r in self.rows], self.field)
        return len(pivots)

    def inverse(self) -> "Matrix":
        _require_square(self)
        n = self.nrows
        field = self.field
        ident = Matrix.identity(field, n)
        aug = [list(self.rows[i]) + list(ident.rows[i]) for i in range(n)]
        reduced, pivots = _row_echelon(aug, field, ncols=n)
        if len(pivots) != n:
            raise SingularMatrix("matrix is not invertible")
        return Matrix(field, [row[n:] for row in reduced])

    def det(self) -> FieldElement:
        _require_square(self)
        field = self.field
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = field.one()
        for colidx in range(n):
            piv = _pick_pivot(rows, colidx, colidx, field)
            if piv is None:
                return field.zero()
            if piv != colidx:
                rows[piv], rows[colidx] = rows[colidx], rows[piv]
                det = -det
            det = det * rows[colidx][colidx]
            inv = rows[colidx][colidx].inverse()
            for r in range(colidx + 1, n):
                f = rows[r][colidx] * inv
                if f.is_zero():
                    continue
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[colidx])]
        return det

    def nullspace(self) -> list:
        """Basis of the right kernel, deterministic order (free columns ascending)."""
        field = self.field
        reduced, pivots = _row_echelon([list(r) for r in self.rows], field)
        pivot_cols = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivot_cols]
        basis = []
        for fcol in free:
            vec = [field.zero()] * self.ncols
            vec[fcol] = field.one()
            for rowidx, pcol in enumerate(pivots):
                vec[pcol] = -reduced[rowidx][fcol]
            basis.append(tuple(vec))
        return basis

    def solve_right(self, b: Sequence[FieldElement]):
        """One solution x of self*x = b, or None."""
        field = self.field
        aug = [list(self.rows[i]) + [b[i]] for i in range(self.nrows)]
        reduced, pivots = _row_echelon(aug, field, ncols=self.ncols)
        for rowidx in range(len(pivots), self.nrows):
            if not _is_zero_row(reduced[rowidx][: self.ncols], field) or \
                    not reduced[rowidx][self.ncols].is_zero():
                if not reduced[rowidx][self.ncols].is_zero():
                    return None
        x = [field.zero()] * self.ncols
        for rowidx, pcol in enumerate(pivots):
            x[pcol] = reduced[rowidx][self.ncols]
        return tuple(x)

    def apply(self, v: Sequence[FieldElement]) -> tuple:
        zero = self.field.zero()
        out = []
        for row in self.rows:
            acc = zero
            for a, x in zip(row, v):
                if not a.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)


def _require_square(A: Matrix):
    if A.nrows != A.ncols:
        raise NonSquare(f"{A.nrows}x{A.ncols} matrix where square is required")


def _pivot_eps(field: Field, scale: float) -> float:
    if field.is_exact:
        return 0.0
    return max(1e-12, field.tolerance * 1e-3) * max(1.0, scale)


def _pick_pivot(rows, start_row: int, col: int, field: Field):
    if field.is_exact:
        for r in range(start_row, len(rows)):
            if not rows[r][col].is_zero():
                return r
        return None
    best, best_abs = None, 0.0
    for r in range(start_row, len(rows)):
        a = field.abs_raw(rows[r][col].rep)
        if a > best_abs:
            best, best_abs = r, a
    scale = max((field.abs_raw(x.rep) for row in rows for x in row), default=0.0)
    if best is None or best_abs <= _pivot_eps(field, scale):
        return None
    return best


def _is_zero_row(row, field: Field) -> bool:
    return all(a.is_zero() for a in row)


def _row_echelon(rows, field: Field, ncols: int = None):
    """In-place reduced row echelon over the first ``ncols`` columns.
    Returns (rows, pivot column list)."""
    nrows = len(rows)
    width = len(rows[0]) if rows else 0
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = _pick_pivot(rows, r, c, field)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [a * inv for a in rows[r]]
        for rr in range(nrows):
            if rr == r:
                continue
            f = rows[rr][c]
            if f.is_zero():
                continue
            rows[rr] = [a - f * b for a, b in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


class _Echelon:
    """Incremental echelon structure for span-membership tests."""

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self.rows = {}  # pivot index -> normalised vector (list)

    def _reduce(self, vec):
        vec = list(vec)
        field = self.field
        for piv in sorted(self.rows):
            c = vec[piv]
            if c.is_zero():
                continue
            row = self.rows[piv]
            vec = [a - c * b for a, b in zip(vec, row)]
        return vec

    def insert(self, vec) -> bool:
        """Add vec to the span; True if it was independent."""
        field = self.field
        vec = self._reduce(vec)
        piv = None
        if field.is_exact:
            for i, a in enumerate(vec):
                if not a.is_zero():
                    piv = i
                    break
        else:
            scale = max((field.abs_raw(a.rep) for a in vec), default=0.0)
            eps = _pivot_eps(field, 1.0)
            best, best_abs = None, eps
            for i, a in enumerate(vec):
                m = field.abs_raw(a.rep)
                if m > best_abs:
                    best, best_abs = i, m
            piv = best
        if piv is None:
            return False
        inv = vec[piv].inverse()
        self.rows[piv] = [a * inv for a in vec]
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


# ----------------------------------------------------------------------
# characteristic and minimal polynomials
# ----------------------------------------------------------------------

def charpoly(A: Matrix) -> Poly:
    """det(T*I - A) by the Berkowitz algorithm (division free)."""
    _require_square(A)
    field = A.field
    n = A.nrows
    one, zero = field.one(), field.zero()
    if n == 0:
        return Poly.one(field)
    rows = A.rows
    C = [one]
    for r in range(1, n + 1):
        a_rr = rows[r - 1][r - 1]
        R = rows[r - 1][: r - 1]
        S = [rows[i][r - 1] for i in range(r - 1)]
        t = [one, -a_rr]
        v = list(S)
        for j in range(2, r + 1):
            if j > 2:
                v = [_dot(rows[i][: r - 1], v, zero) for i in range(r - 1)]
            t.append(-_dot(R, v, zero))
        Cn = []
        for i in range(r + 1):
            acc = zero
            for j in range(max(0, i - r), min(i, r - 1) + 1):
                ti = t[i - j]
                if not ti.is_zero():
                    acc = acc + ti * C[j]
            Cn.append(acc)
        C = Cn
    return Poly(field, list(reversed(C)))


def _dot(xs, ys, zero):
    acc = zero
    for a, b in zip(xs, ys):
        if not a.is_zero():
            acc = acc + a * b
    return acc


def krylov_annihilator(A: Matrix, v: Sequence[FieldElement]) -> Poly:
    """Monic minimal g with g(A)v = 0."""
    _require_square(A)
    field = A.field
    n = A.nrows
    ech_rows = []  # list of (vector, combo) reduced vectors with power-combination tails
    cur = tuple(v)
    combo = [field.one()]
    for j in range(n + 1):
        vec = list(cur)
        tail = [field.zero()] * (n + 1)
        for idx, c in enumerate(combo):
            tail[idx] = c
        for evec, etail in ech_rows:
            piv = _first_nonzero(evec, field)
            c = vec[piv]
            if c.is_zero():
                continue
            vec = [a - c * b for a, b in zip(vec, evec)]
            tail = [a - c * b for a, b in zip(tail, etail)]
        piv = _first_nonzero(vec, field)
        if piv is None:
            return Poly(field, tail).monic()
        inv = vec[piv].inverse()
        ech_rows.append(([a * inv for a in vec], [a * inv for a in tail]))
        cur = A.apply(cur)
        combo = [field.zero()] * (j + 2)
        combo[j + 1] = field.one()
    raise AssertionError("krylov annihilator did not terminate")


def _first_nonzero(vec, field: Field):
    if field.is_exact:
        for i, a in enumerate(vec):
            if not a.is_zero():
                return i
        return None
    scale = max((field.abs_raw(a.rep) for a in vec), default=0.0)
    eps = _pivot_eps(field, 1.0)
    best, best_abs = None, eps
    for i, a in enumerate(vec):
        m = field.abs_raw(a.rep)
        if m > best_abs:
            best, best_abs = i, m
    return best


def minpoly(A: Matrix) -> Poly:
    """Monic minimal polynomial via iterated Krylov spans."""
    _require_square(A)
    field = A.field
    n = A.nrows
    m = Poly.one(field)
    ident = Matrix.identity(field, n)
    for i in range(n):
        g = krylov_annihilator(A, ident.col(i))
        m = m.lcm(g)
        if m.degree == n:
            break
    return m


# ----------------------------------------------------------------------
# nilpotent structure
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Weakly increasing parts summing to the ambient size."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise UsageError("partition parts must be positive")
        if tuple(sorted(self.parts)) != self.parts:
            raise UsageError("partition parts must be weakly increasing")

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


def is_nilpotent(A: Matrix) -> bool:
    _require_square(A)
    return (A ** A.nrows).is_zero()


def nilpotent_partition(A: Matrix) -> Partition:
    """Jordan partition of a nilpotent matrix from ranks of its powers."""
    _require_square(A)
    if not is_nilpotent(A):
        raise NotNilpotent("matrix is not nilpotent")
    n = A.nrows
    ranks = [n]
    P = Matrix.identity(A.field, n)
    for _ in range(n + 1):
        P = P * A
        ranks.append(P.rank())
        if ranks[-1] == 0:
            break
    while len(ranks) < n + 2:
        ranks.append(0)
    parts = []
    for s in range(1, n + 1):
        mult = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        parts.extend([s] * mult)
    return Partition(tuple(sorted(parts)))


def _chain_filtration(A: Matrix, B: Matrix, d: int) -> list:
    """Chain tops (v, level) for the K[x]-module structure of A on ker-powers
    of B = p(A), deg p = d.  Independence is tested K-linearly on the A-orbits
    {A^i v : i < d}, which realises L-linear independence for L = K[x]/(p)."""
    field = A.field
    n = A.nrows
    kers = [[]]
    Bj = B
    while True:
        ker = Matrix.nullspace(Bj)
        if len(ker) == len(kers[-1]):
            break
        kers.append(ker)
        if len(ker) == n:
            break
        Bj = Bj * B
    s = len(kers) - 1
    if s == 0:
        return []
    dims = [len(k) for k in kers] + [len(kers[-1])]
    chains = []
    carry = []
    for level in range(s, 0, -1):
        expected = (2 * dims[level] - dims[level - 1] - dims[level + 1]) // d
        if expected * d != 2 * dims[level] - dims[level - 1] - dims[level + 1]:
            raise AssertionError("kernel dimensions incompatible with factor degree")
        ech = _Echelon(field, n)
        for vec in kers[level - 1]:
            ech.insert(vec)
        for w in carry:
            orbit = w
            for _ in range(d):
                ech.insert(orbit)
                orbit = A.apply(orbit)
        new_tops = []
        for u in kers[level]:
            if len(new_tops) == expected:
                break
            if ech.insert(u):
                orbit = A.apply(u)
                for _ in range(d - 1):
                    if not ech.insert(orbit):
                        raise AssertionError("orbit of a new chain top is dependent")
                    orbit = A.apply(orbit)
                new_tops.append(u)
        if len(new_tops) != expected:
            raise AssertionError(
                f"found {len(new_tops)} chain tops at level {level}, expected {expected}")
        chains.extend((u, level) for u in new_tops)
        carry = [B.apply(w) for w in carry] + [B.apply(u) for u in new_tops]
    return chains


def nilpotent_jordan_basis(N: Matrix) -> tuple:
    """(S, partition_desc) with S^-1 N S = block_diag(J_{0,l}) for the parts
    in descending order."""
    _require_square(N)
    if not is_nilpotent(N):
        raise NotNilpotent("matrix is not nilpotent")
    chains = _chain_filtration(N, N, 1)
    chains.sort(key=lambda c: -c[1])
    cols = []
    for v, l in chains:
        chain_vecs = [v]
        for _ in range(l - 1):
            chain_vecs.append(N.apply(chain_vecs[-1]))
        cols.extend(reversed(chain_vecs))
    S = Matrix.from_cols(N.field, cols)
    return S, tuple(l for _, l in chains)


def nilpotent_conjugator(N1: Matrix, N2: Matrix) -> Matrix:
    """Q with Q N1 Q^-1 = N2 for nilpotents of equal partition."""
    S1, l1 = nilpotent_jordan_basis(N1)
    S2, l2 = nilpotent_jordan_basis(N2)
    if l1 != l2:
        raise NotSimilar(f"nilpotent partitions differ: {l1} vs {l2}")
    Q = S2 * S1.inverse()
    if not (Q * N1 * Q.inverse()).allclose(N2):
        raise VerificationFailed("nilpotent conjugator failed to verify")
    return Q


# ----------------------------------------------------------------------
# similarity
# ----------------------------------------------------------------------

def solve_similarity(A: Matrix, B: Matrix, seed: int = 0, tries: int = 32) -> Matrix:
    """Invertible P with P A P^-1 = B, from the solution space of X A = B X."""
    _require_square(A)
    _require_square(B)
    if A.nrows != B.nrows:
        raise NotSimilar("sizes differ")
    field = A.field
    if field.is_exact and charpoly(A) != charpoly(B):
        raise NotSimilar("characteristic polynomials differ")
    n = A.nrows
    zero = field.zero()
    sys_rows = []
    for i in range(n):
        for j in range(n):
            row = [zero] * (n * n)
            for l in range(n):
                row[i * n + l] = row[i * n + l] + A.rows[l][j]
            for k in range(n):
                row[k * n + j] = row[k * n + j] - B.rows[i][k]
            sys_rows.append(row)
    sysm = Matrix(field, sys_rows)
    basis = sysm.nullspace()
    if not basis:
        raise NotSimilar("no solutions of X A = B X")
    mats = [Matrix(field, [vec[i * n:(i + 1) * n] for i in range(n)]) for vec in basis]

    def try_candidate(X):
        try:
            Xi = X.inverse()
        except SingularMatrix:
            return None
        if (X * A * Xi).allclose(B):
            return X
        return None

    for X in mats:
        got = try_candidate(X)
        if got is not None:
            return got
    rng = random.Random(seed)
    pool = _combination_pool(field)
    for _ in range(tries):
        coeffs = [pool(rng) for _ in mats]
        X = Matrix.zeros(field, n, n)
        for c, M in zip(coeffs, mats):
            X = X + M.scale(c)
        got = try_candidate(X)
        if got is not None:
            return got
    if field.is_finite and field.cardinality ** len(mats) <= 65536:
        from .fields import enumerate_elements

        elems = list(enumerate_elements(field))
        for coeffs in itertools.product(elems, repeat=len(mats)):
            X = Matrix.zeros(field, n, n)
            for c, M in zip(coeffs, mats):
                X = X + M.scale(c)
            got = try_candidate(X)
            if got is not None:
                return got
        raise NotSimilar("solution space contains no invertible element")
    raise NotSimilar("no invertible solution found within the retry bound")


def _combination_pool(field: Field) -> Callable:
    if field.is_finite:
        card = field.cardinality
        if card <= SCANNABLE_COMBOS:
            from .fields import enumerate_elements

            elems = list(enumerate_elements(field))
            return lambda rng: elems[rng.randrange(len(elems))]
        return lambda rng: _random_element(field, rng)
    return lambda rng: field(rng.randrange(-9, 10))


SCANNABLE_COMBOS = 4096


def _random_element(field: Field, rng: random.Random) -> FieldElement:
    if field.kind == "prime":
        return field.element(rng.randrange(field.p))
    if field.kind == "ext" and field.is_finite:
        return field.element(tuple(
            _random_element(field.base, rng).rep for _ in range(field.degree)))
    return field(rng.randrange(-9, 10))


def eigenbasis(M: Matrix, eigenvalues) -> Matrix:
    """S with S^-1 M S = diag(eigenvalues); eigenvalues must be simple."""
    field = M.field
    n = M.nrows
    ident = Matrix.identity(field, n)
    cols = []
    for lam in eigenvalues:
        ns = (M - ident.scale(field(lam))).nullspace()
        if not ns:
            raise NotSimilar(f"no eigenvector for {lam!r}")
        cols.append(ns[0])
    S = Matrix.from_cols(field, cols)
    check = S.inverse() * M * S
    if not check.allclose(Matrix.diagonal(field, list(eigenvalues))):
        raise VerificationFailed("eigenbasis failed to diagonalise")
    return S


# ----------------------------------------------------------------------
# generalized Jordan form
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class JordanBlockSpec:
    poly: Poly
    size: int  # l, the number of companion blocks

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def alpha(self) -> Optional[FieldElement]:
        if self.poly.degree == 1:
            return -self.poly[0]
        return None

    def realization(self) -> Matrix:
        return Matrix.generalized_jordan_block(self.poly, self.size)


@dataclass(frozen=True)
class GeneralizedJordanForm:
    blocks: Tuple[JordanBlockSpec, ...]
    conjugator: Matrix  # P with P A P^-1 = realization
    realization: Matrix


def generalized_jordan_form(A: Matrix, seed: int = 0) -> GeneralizedJordanForm:
    _require_square(A)
    field = A.field
    n = A.nrows
    if field.is_exact:
        from .factor import factor

        chi = charpoly(A)
        fac = factor(chi, seed)
        pairs = [(t.poly, t.multiplicity, t.certified) for t in fac.factors]
        for p, _, _ in pairs:
            if p.degree >= 1 and p.gcd(p.derivative()).degree != 0:
                raise InseparableCharPoly(f"inseparable factor {p!r}")
        block_data = _jordan_block_data(A, pairs)
    else:
        # numeric root clusters are validated by the chain structure; widen
        # the cluster radius until the multiplicities are consistent
        last_err = None
        block_data = None
        for attempt in range(14):
            try:
                pairs = _approx_charpoly_factors(A, attempt)
                block_data = _jordan_block_data(A, pairs)
                break
            except (VerificationFailed, AssertionError) as exc:
                last_err = exc
        if block_data is None:
            raise VerificationFailed(
                f"no consistent eigenvalue clustering found: {last_err}")

    specs = tuple(JordanBlockSpec(p, l) for p, l, _ in block_data)
    realization = Matrix.block_diag(field, [b.realization() for b in specs])
    qcols = []
    for p, l, cols in block_data:
        Jb = Matrix.generalized_jordan_block(p, l)
        W = _cyclic_basis(Jb)
        part = Matrix.from_cols(field, cols) * W.inverse()
        qcols.extend(part.cols())
    Q = Matrix.from_cols(field, qcols)
    P = Q.inverse()
    if not (P * A * Q).allclose(realization):
        raise VerificationFailed("generalized Jordan form failed to verify")
    return GeneralizedJordanForm(specs, P, realization)


def _cyclic_basis(M: Matrix) -> Matrix:
    """Krylov basis from a cyclic vector of M (M must be non-derogatory)."""
    field = M.field
    n = M.nrows
    ident = Matrix.identity(field, n)
    for i in range(n):
        v = ident.col(i)
        cols = [v]
        ech = _Echelon(field, n)
        ech.insert(v)
        ok = True
        cur = v
        for _ in range(n - 1):
            cur = M.apply(cur)
            if not ech.insert(cur):
                ok = False
                break
            cols.append(cur)
        if ok:
            return Matrix.from_cols(field, cols)
    # combinations of standard basis vectors as a fallback
    def krylov(v):
        cols = [v]
        ech = _Echelon(field, n)
        ech.insert(v)
        cur = v
        for _ in range(n - 1):
            cur = M.apply(cur)
            if not ech.insert(cur):
                return None
            cols.append(cur)
        return Matrix.from_cols(field, cols)

    one, zero = field.one(), field.zero()
    for i in range(n):
        for j in range(i + 1, n):
            v = tuple(one if t in (i, j) else zero for t in range(n))
            got = krylov(v)
            if got is not None:
                return got
    for count in range(3, n + 1):
        v = tuple(one if t < count else zero for t in range(n))
        got = krylov(v)
        if got is not None:
            return got
    raise NotSimilar("matrix block has no cyclic vector")


def _newton_refine_root(coeffs, z: complex, mult: int, iters: int = 40) -> complex:
    """Polish a root of multiplicity ``mult``: it is a simple root of the
    (mult-1)-th derivative, where Newton converges to machine precision."""
    der = [complex(c) for c in coeffs]
    for _ in range(mult - 1):
        der = [der[i] * i for i in range(1, len(der))]

    def ev(poly, x):
        acc = 0j
        for c in reversed(poly):
            acc = acc * x + c
        return acc

    dder = [der[i] * i for i in range(1, len(der))]
    for _ in range(iters):
        fz = ev(der, z)
        dz = ev(dder, z)
        if dz == 0:
            break
        step = fz / dz
        z -= step
        if abs(step) < 1e-15 * (1.0 + abs(z)):
            break
    return z


def _jordan_block_data(A: Matrix, pairs) -> list:
    """(poly, l, krylov columns) per block; raises when the kernel chain
    structure contradicts the claimed factor multiplicities."""
    block_data = []
    for p, s, certified in pairs:
        d = p.degree
        B = p(A)
        try:
            chains = _chain_filtration(A, B, d)
        except AssertionError as exc:
            if not certified:
                raise FactorizationUnavailable(
                    f"uncertified factor {p!r} over Q behaved reducibly: {exc}") from exc
            raise
        chains.sort(key=lambda c: -c[1])
        if sum(l for _, l in chains) != s:
            if not certified:
                raise FactorizationUnavailable(
                    f"uncertified factor {p!r}: multiplicity mismatch")
            raise VerificationFailed("chain multiplicities do not match the factorization")
        for v, l in chains:
            cols = [v]
            for _ in range(l * d - 1):
                cols.append(A.apply(cols[-1]))
            block_data.append((p, l, cols))
    return block_data


def _cluster_roots(roots, radius):
    clusters = []
    for r in sorted(roots, key=lambda z: (round(z.real, 8), round(z.imag, 8))):
        for c in clusters:
            if abs(c[0] - r) <= radius:
                c[1] += 1
                c[0] = c[0] + (r - c[0]) / c[1]
                break
        else:
            clusters.append([r, 1])
    return clusters


def _approx_charpoly_factors(A: Matrix, attempt: int = 0) -> list:
    """(poly, multiplicity, True) clusters over R/C from numeric roots.

    A root of multiplicity m is only located to about eps^(1/m) by the
    global iteration, so the cluster radius escalates with ``attempt``
    (the caller retries until the chain structure validates the clusters);
    over R every complex cluster must find a conjugate partner at the
    current radius.  Cluster centers are polished by Newton on a
    derivative of the characteristic polynomial.
    """
    field = A.field
    chi = charpoly(A)
    roots = approx_roots(chi)
    scale = 1.0 + max(abs(r) for r in roots) if roots else 1.0
    coeffs = [complex(c.rep) for c in chi.coeffs]
    radius = max(1e-8, field.tolerance * 1e-1) * scale * 8.0 ** attempt
    if radius > 0.05 * scale:
        raise VerificationFailed("eigenvalue cluster radius escalation exhausted")
    return _pair_clusters(field, _cluster_roots(roots, radius), radius, coeffs)


def _pair_clusters(field, clusters, radius, coeffs):
    for c in clusters:
        if c[1] > 1:
            c[0] = _newton_refine_root(coeffs, c[0], c[1])
    pairs = []
    if field.kind == "complex":
        for z, m in clusters:
            pairs.append((Poly(field, [field(-z), field.one()]), m, True))
        return pairs
    used = [False] * len(clusters)
    for i, (z, m) in enumerate(clusters):
        if used[i]:
            continue
        if abs(z.imag) <= radius:
            used[i] = True
            pairs.append((Poly(field, [field(-z.real), field.one()]), m, True))
            continue
        for j in range(i + 1, len(clusters)):
            if not used[j] and clusters[j][1] == m and \
                    abs(clusters[j][0] - z.conjugate()) <= 2 * radius:
                used[i] = used[j] = True
                b = -2.0 * z.real
                c = abs(z) ** 2
                pairs.append((Poly(field, [field(c), field(b), field.one()]), m, True))
                break
        else:
            raise VerificationFailed("unpaired complex eigenvalue over R")
    pairs.sort(key=lambda t: t[0].sort_key())
    return pairs


# ----------------------------------------------------------------------
# companion lift (the left-multiplication homomorphism)
# ----------------------------------------------------------------------

def companion_lift(W: Matrix, p: Poly, root: complex = None) -> Matrix:
    """Entrywise left-multiplication lift M_l(K(alpha)) -> M_{l*d}(K).

    Exact kinds: the entries of W live in K[t]/(p) and each entry c(alpha)
    becomes c evaluated at the companion matrix of p.  Over R with a complex
    quadratic factor, ``root`` names the chosen complex root and entries are
    decomposed as u + v*root.
    """
    base = p.field
    d = p.degree
    C = Matrix.companion(p)
    powers = [Matrix.identity(base, d)]
    for _ in range(d - 1):
        powers.append(powers[-1] * C)

    wf = W.field
    if wf.kind == "ext" and wf.base.key == base.key and \
            wf.modulus == tuple(c.rep for c in p.coeffs):
        def lift_entry(x):
            out = Matrix.zeros(base, d, d)
            for i, c in enumerate(x.rep):
                ci = base.element(c)
                if not ci.is_zero():
                    out = out + powers[i].scale(ci)
            return out
    elif wf.kind == "complex" and base.kind == "real" and d == 2 and root is not None:
        lam = complex(root)

        def lift_entry(x):
            w = complex(x.rep)
            v = w.imag / lam.imag
            u = w.real - v * lam.real
            return powers[0].scale(base(u)) + powers[1].scale(base(v))
    else:
        raise DescriptorMismatch(
            f"cannot lift entries of {wf} through the companion of {p!r} over {base}")

    n = W.nrows * d
    z = base.zero()
    rows = [[z] * (W.ncols * d) for _ in range(n)]
    for i in range(W.nrows):
        for j in range(W.ncols):
            blockm = lift_entry(W.rows[i][j])
            for bi in range(d):
                for bj in range(d):
                    rows[i * d + bi][j * d + bj] = blockm.rows[bi][bj]
    return Matrix(base, rows)
