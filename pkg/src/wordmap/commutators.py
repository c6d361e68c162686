"""Products of commutators on M_n(K).

Every matrix over a perfect field is a product of two trace-zero matrices;
the constructions here produce the two factors explicitly for each canonical
shape (2x2 shapes, Jordan blocks, diagonals, Jordan-plus-scalar, companions)
and a dispatcher that routes an arbitrary matrix through its generalized
Jordan form.  A second layer writes any trace-zero matrix as one commutator
[X, Y], which together solves [X1,X2]...[X_{m-1},X_m] = A for even m >= 4
(and m = 2 exactly on the trace-zero slice).

All factor pairs are re-verified by direct multiplication before return.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Tuple

from .errors import (
    NonzeroTrace,
    UnhandledShape,
    Unsupported,
    UsageError,
    VerificationFailed,
    WitnessNotFound,
)
from .fields import Field, FieldElement, enumerate_elements
from .matrices import (
    Matrix,
    _cyclic_basis,
    charpoly,
    generalized_jordan_form,
    companion_lift,
)
from .polynomials import Poly
from .words import CommutatorProduct, Witness, make_witness


@dataclass(frozen=True)
class TraceZeroPair:
    """Two trace-zero matrices whose product is ``target``."""

    t1: Matrix
    t2: Matrix
    target: Matrix

    def __iter__(self):
        return iter((self.t1, self.t2))


def _checked_pair(t1: Matrix, t2: Matrix, target: Matrix) -> TraceZeroPair:
    if not t1.trace().is_zero() or not t2.trace().is_zero():
        raise VerificationFailed("factor has nonzero trace")
    if not (t1 * t2).allclose(target):
        raise VerificationFailed("trace-zero factor product mismatch")
    return TraceZeroPair(t1, t2, target)


def _conjugated_pair(pair: TraceZeroPair, S: Matrix, target: Matrix) -> TraceZeroPair:
    """(S t1 S^-1, S t2 S^-1) against the conjugated target."""
    Si = S.inverse()
    return _checked_pair(S * pair.t1 * Si, S * pair.t2 * Si, target)


# ----------------------------------------------------------------------
# 2x2 canonical shapes
# ----------------------------------------------------------------------

def two_by_two_trace_zero(A: Matrix) -> TraceZeroPair:
    """Explicit factor pair for the three canonical 2x2 shapes; general
    matrices must be canonicalized first (see factor_two_trace_zero)."""
    if A.nrows != 2 or A.ncols != 2:
        raise UnhandledShape("2x2 matrix expected")
    field = A.field
    a00, a01 = A.rows[0]
    a10, a11 = A.rows[1]
    one = field.one()
    zero = field.zero()
    if a01.is_zero() and a10.is_zero():
        t1 = Matrix(field, [[zero, a00], [one, zero]])
        t2 = Matrix(field, [[zero, a11], [one, zero]])
        return _checked_pair(t1, t2, A)
    if a01 == one and a10.is_zero() and a00 == a11:
        alpha = a00
        t1 = Matrix.diagonal(field, [one, -one])
        t2 = Matrix(field, [[alpha, one], [zero, -alpha]])
        return _checked_pair(t1, t2, A)
    if a00.is_zero() and a10 == one and not a01.is_zero():
        b, a = a01, a11
        t1 = Matrix(field, [[a, -b], [one + a * a / b, -a]])
        t2 = Matrix(field, [[one, zero], [a / b, -one]])
        return _checked_pair(t1, t2, A)
    raise UnhandledShape("not a canonical 2x2 shape; canonicalize first")


# ----------------------------------------------------------------------
# Jordan blocks, diagonals, Jordan-plus-scalar, companions
# ----------------------------------------------------------------------

def _sign_diag_fix(field: Field, signs: List[FieldElement], extra: int = 0) -> Matrix:
    """Diagonal D with D J' D^-1 = J for J' having superdiagonal ``signs``;
    ``extra`` appends that many trailing ones (untouched coordinates)."""
    d = [field.one()]
    for s in signs:
        d.append(d[-1] * s)
    d.extend([field.one()] * extra)
    return Matrix.diagonal(field, d)


def jordan_block_trace_zero(alpha: FieldElement, n: int) -> TraceZeroPair:
    """J_{alpha,n} as a product of two trace-zero matrices (n >= 2)."""
    if n < 2:
        raise UsageError("Jordan factorization needs n >= 2")
    field = alpha.field
    target = Matrix.jordan_block(alpha, n)
    one, zero = field.one(), field.zero()
    if n == 2:
        return two_by_two_trace_zero(target)
    if n % 2 == 0:
        d = [one if i % 2 == 0 else -one for i in range(n)]
        t1 = Matrix.diagonal(field, d)
        rows = [[zero] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = alpha if i % 2 == 0 else -alpha
            if i + 1 < n:
                rows[i][i + 1] = one if i % 2 == 0 else -one
        t2 = Matrix(field, rows)
        return _checked_pair(t1, t2, target)
    # odd n: cyclic-shift factorization lands on the sign-alternating block
    t1 = Matrix.cyclic_shift(field, n)
    rows = [[zero] * n for _ in range(n)]
    rows[0][n - 1] = alpha
    for j in range(1, n):
        rows[j][j - 1] = alpha
        rows[j][j] = one if (j + 1) % 2 == 0 else -one
    t2 = Matrix(field, rows)
    signs = [one if i % 2 == 0 else -one for i in range(n - 1)]
    D = _sign_diag_fix(field, signs)
    return _conjugated_pair(TraceZeroPair(t1, t2, t1 * t2), D, target)


def diagonal_trace_zero(entries) -> TraceZeroPair:
    """diag(entries) as a product of two trace-zero matrices.

    Zero entries are paired with arbitrary partners through the 2x2 swap
    formula (which needs no division); the 3x3 closing formula is used once
    for odd sizes and needs two nonzero entries in its corners.  An all-zero
    diagonal is 0 * 0.
    """
    entries = list(entries)
    n = len(entries)
    if n < 1:
        raise UsageError("empty diagonal")
    field = entries[0].field
    target = Matrix.diagonal(field, entries)
    one, zero = field.one(), field.zero()
    nz = [i for i, e in enumerate(entries) if not e.is_zero()]
    if not nz:
        z = Matrix.zeros(field, n, n)
        return _checked_pair(z, z, target)
    if n == 1:
        raise UnhandledShape("a nonzero 1x1 block is not a product of two trace-zero 1x1s")
    groups = []  # ("pair", i, j) | ("triple", i, j, k) | ("zeros", idxs)
    if n % 2 == 0:
        order_pool = list(range(n))
        for t in range(0, n, 2):
            groups.append(("pair", order_pool[t], order_pool[t + 1]))
    elif len(nz) >= 2:
        i, k = nz[0], nz[1]
        j = next(t for t in range(n) if t not in (i, k))
        groups.append(("triple", i, j, k))
        rest = [t for t in range(n) if t not in (i, j, k)]
        for t in range(0, len(rest), 2):
            groups.append(("pair", rest[t], rest[t + 1]))
    else:
        i = nz[0]
        j = next(t for t in range(n) if t != i)
        groups.append(("pair", i, j))
        rest = [t for t in range(n) if t not in (i, j)]
        groups.append(("zeros", rest))
    order, blocks1, blocks2 = [], [], []
    for g in groups:
        if g[0] == "pair":
            _, i, j = g
            order.extend([i, j])
            blocks1.append(Matrix(field, [[zero, one], [one, zero]]))
            blocks2.append(Matrix(field, [[zero, entries[j]], [entries[i], zero]]))
        elif g[0] == "triple":
            _, i, j, k = g
            order.extend([i, j, k])
            a1, a2, a3 = entries[i], entries[j], entries[k]
            blocks1.append(Matrix(field, [
                [zero, a3, zero], [-a1, a3, zero], [zero, zero, -a3]]))
            blocks2.append(Matrix(field, [
                [one, -(a2 / a1), zero], [a1 / a3, zero, zero], [zero, zero, -one]]))
        else:
            idxs = g[1]
            order.extend(idxs)
            z = Matrix.zeros(field, len(idxs), len(idxs))
            blocks1.append(z)
            blocks2.append(z)
    P = Matrix.permutation(field, order)
    t1 = Matrix.block_diag(field, blocks1)
    t2 = Matrix.block_diag(field, blocks2)
    Pi = P.inverse()
    return _checked_pair(Pi * t1 * P, Pi * t2 * P, target)


def jordan_plus_scalar_trace_zero(alpha: FieldElement, n: int,
                                  beta: FieldElement) -> TraceZeroPair:
    """J_{alpha,n} (+) (beta), total size n+1, as a trace-zero product."""
    if n < 2:
        raise UsageError("needs a Jordan part of size >= 2")
    field = alpha.field
    N = n + 1
    one, zero = field.one(), field.zero()
    target = Matrix.block_diag(field, [
        Matrix.jordan_block(alpha, n), Matrix.diagonal(field, [beta])])
    r1 = [[zero] * N for _ in range(N)]
    r2 = [[zero] * N for _ in range(N)]
    if n % 2 == 0:
        for i in range(n - 1):
            r1[i][i + 1] = one
        r1[n - 1][0] = one
        r1[n - 1][n] = one
        r1[n][0] = beta
        r2[0][N - 1] = one
        for j in range(1, N):
            r2[j][j - 1] = alpha
        for j in range(1, n):
            r2[j][j] = one if (j + 1) % 2 == 0 else -one
        r2[n][n] = -one
    else:
        for i in range(N - 1):
            r1[i][i + 1] = one
        r1[N - 1][0] = one
        r2[0][N - 1] = beta
        for j in range(1, N):
            r2[j][j - 1] = alpha
        for j in range(1, n):
            r2[j][j] = one if (j + 1) % 2 == 0 else -one
    t1, t2 = Matrix(field, r1), Matrix(field, r2)
    prod = t1 * t2
    signs = [prod.rows[i][i + 1] for i in range(n - 1)]
    D = _sign_diag_fix(field, signs, extra=1)
    return _conjugated_pair(TraceZeroPair(t1, t2, prod), D, target)


def companion_trace_zero(p: Poly) -> TraceZeroPair:
    """The companion matrix of monic p, deg p >= 3, as a trace-zero product."""
    n = p.degree
    if n < 3:
        raise UsageError("companion factorization needs degree >= 3")
    if not p.is_monic():
        raise UsageError("p must be monic")
    field = p.field
    one, zero = field.one(), field.zero()
    nm2 = field(n - 2)
    r1 = [[zero] * n for _ in range(n)]
    r2 = [[zero] * n for _ in range(n)]
    r1[0][n - 1] = p[0]
    for j in range(1, n - 1):
        r1[j][j] = one
        r1[j][n - 1] = p[j]
    r1[n - 1][0] = one
    r1[n - 1][1] = -one
    r1[n - 1][n - 1] = -nm2
    r2[0][0] = one
    r2[0][n - 2] = r2[0][n - 2] + one
    r2[0][n - 1] = -p[n - 1] - nm2
    for j in range(1, n - 1):
        r2[j][j - 1] = one
    r2[n - 1][n - 1] = -one
    return _checked_pair(Matrix(field, r1), Matrix(field, r2), Matrix.companion(p))


# ----------------------------------------------------------------------
# general dispatcher (two trace-zero factors for any matrix)
# ----------------------------------------------------------------------

def factor_two_trace_zero(A: Matrix, seed: int = 0) -> TraceZeroPair:
    """Write any square A (n >= 2; n = 1 only for A = 0) as T1*T2 with
    trace(T1) = trace(T2) = 0, routing through the generalized Jordan form."""
    u, v, G, _ = _factor_two_canonical(A, seed)
    Gi = G.inverse()
    return _checked_pair(Gi * u * G, Gi * v * G, A)


def _factor_two_canonical(A: Matrix, seed: int = 0):
    """(U, V, G, M) with U*V = M, G A G^-1 = M, and M depending only on the
    Jordan data of A (so conjugate inputs share the same middle)."""
    field = A.field
    n = A.nrows
    if n != A.ncols:
        raise UsageError("square matrix expected")
    ident = Matrix.identity(field, n)
    if A.is_zero():
        z = Matrix.zeros(field, n, n)
        return z, z, ident, A
    if n == 1:
        raise Unsupported("a nonzero 1x1 matrix is not a product of two trace-zero factors")
    if n == 2:
        shape, S = _canonical_2x2(A, seed)
        pair = two_by_two_trace_zero(shape)
        return pair.t1, pair.t2, S.inverse(), shape
    tasks, G = _factorization_tasks(A, seed)
    u = Matrix.block_diag(field, [t[0].t1 for t in tasks])
    v = Matrix.block_diag(field, [t[0].t2 for t in tasks])
    mid = Matrix.block_diag(field, [t[0].target for t in tasks])
    return u, v, G, mid


def _canonical_2x2(A: Matrix, seed: int):
    """(canonical shape C, S) with S^-1 A S = C; C is one of the 2x2 canonical shapes."""
    field = A.field
    chi = charpoly(A)
    a = -chi[1]
    b = -chi[0]
    roots = _quadratic_roots(chi, seed)
    ident = Matrix.identity(field, 2)
    if len(roots) == 2 and roots[0] != roots[1]:
        cols = []
        for r in roots:
            ns = (A - ident.scale(r)).nullspace()
            cols.append(ns[0])
        S = Matrix.from_cols(field, cols)
        return Matrix.diagonal(field, roots), S
    if len(roots) >= 1:
        alpha = roots[0]
        N = A - ident.scale(alpha)
        if N.is_zero():
            return Matrix.diagonal(field, [alpha, alpha]), ident
        for i in range(2):
            v = ident.col(i)
            u = N.apply(v)
            if not all(x.is_zero() for x in u):
                S = Matrix.from_cols(field, [u, v])
                jshape = Matrix(field, [[alpha, field.one()], [field.zero(), alpha]])
                return jshape, S
        raise VerificationFailed("double root without Jordan vector")
    # irreducible characteristic polynomial: cyclic to the companion shape
    v = ident.col(0)
    S = Matrix.from_cols(field, [v, A.apply(v)])
    comp = Matrix(field, [[field.zero(), b], [field.one(), a]])
    return comp, S


def _quadratic_roots(chi: Poly, seed: int) -> list:
    field = chi.field
    if field.is_exact:
        from .factor import factor

        roots = []
        for term in factor(chi, seed):
            if term.poly.degree == 1:
                roots.extend([-term.poly[0]] * term.multiplicity)
        roots.sort(key=lambda r: r.sort_key())
        return roots
    from .polynomials import approx_roots

    rts = approx_roots(chi)
    tol = max(field.tolerance, 1e-10) * (1.0 + max(abs(r) for r in rts))
    out = []
    for r in rts:
        if field.kind == "real" and abs(r.imag) > tol:
            continue
        out.append(field(r.real) if field.kind == "real" else field(r))
    if len(out) == 2 and abs(complex(out[0].rep) - complex(out[1].rep)) <= tol:
        out = [out[0], out[0]]
    out.sort(key=lambda r: r.sort_key())
    return out


def _factorization_tasks(A: Matrix, seed: int):
    """Cover the Jordan blocks of A by factorizable groups.

    Returns (tasks, G): each task is (TraceZeroPair over K, block index list)
    whose target equals the direct sum of its blocks after the global
    reordering; G conjugates A onto the concatenated task targets.
    """
    field = A.field
    jf = generalized_jordan_form(A, seed)
    blocks = list(jf.blocks)
    by_factor = {}
    for idx, spec in enumerate(blocks):
        by_factor.setdefault(spec.poly, []).append(idx)

    deg1_bigs, deg1_scalars = [], []
    ext_factors = []
    for p in sorted(by_factor, key=lambda q: q.sort_key()):
        idxs = by_factor[p]
        if p.degree == 1:
            for i in idxs:
                (deg1_bigs if blocks[i].size >= 2 else deg1_scalars).append(i)
        else:
            ext_factors.append((p, list(idxs)))

    plans = []  # ("jordan", i) etc, resolved below
    leftover = None
    if len(deg1_scalars) == 1:
        leftover = deg1_scalars[0]
        deg1_scalars = []
    if leftover is not None and deg1_bigs:
        plans.append(("jordan_plus", deg1_bigs[0], leftover))
        deg1_bigs = deg1_bigs[1:]
        leftover = None
    if leftover is not None:
        # coprime merge with the first extension block (always exists: n >= 3)
        if not ext_factors:
            raise Unsupported("isolated scalar block with no partner (n >= 2 expected)")
        p, idxs = ext_factors[0]
        plans.append(("companion_merge", leftover, idxs.pop(0)))
        if not idxs:
            ext_factors.pop(0)
        leftover = None
    for i in deg1_bigs:
        plans.append(("jordan", i))
    if deg1_scalars:
        plans.append(("diag", tuple(deg1_scalars)))
    for p, idxs in ext_factors:
        bigs = [i for i in idxs if blocks[i].size >= 2]
        scas = [i for i in idxs if blocks[i].size == 1]
        if not bigs and len(scas) == 1:
            plans.append(("ext_companion", scas[0]))
            continue
        if len(scas) == 1 and bigs:
            plans.append(("ext_jordan_plus", bigs[0], scas[0]))
            bigs, scas = bigs[1:], []
        for i in bigs:
            plans.append(("ext_jordan", i))
        if scas:
            plans.append(("ext_diag", tuple(scas)))

    covered = []
    task_pairs = []
    fixups = []  # per-task conjugator R with R (+)blocks R^-1 = pair.target
    for item in plans:
        kind = item[0]
        if kind == "jordan":
            i = item[1]
            pair = jordan_block_trace_zero(blocks[i].alpha, blocks[i].size)
            idxs = [i]
            R = None
        elif kind == "jordan_plus":
            i, j = item[1], item[2]
            pair = jordan_plus_scalar_trace_zero(
                blocks[i].alpha, blocks[i].size, blocks[j].alpha)
            idxs = [i, j]
            R = None
        elif kind == "diag":
            idxs = list(item[1])
            pair = diagonal_trace_zero([blocks[i].alpha for i in idxs])
            R = None
        elif kind == "companion_merge":
            i, j = item[1], item[2]
            gamma = blocks[i].alpha
            p, l = blocks[j].poly, blocks[j].size
            lin = Poly.x(field) - Poly.constant(gamma)
            f = lin * p ** l
            pair = companion_trace_zero(f)
            idxs = [i, j]
            B = Matrix.block_diag(field, [
                Matrix.diagonal(field, [gamma]), blocks[j].realization()])
            S = _cyclic_basis(B)
            R = S.inverse()
            if not (R * B * S).allclose(Matrix.companion(f)):
                raise VerificationFailed("companion merge conjugation failed")
        elif kind == "ext_companion":
            i = item[1]
            p = blocks[i].poly
            if p.degree == 2:
                comp = Matrix.companion(p)
                pair = two_by_two_trace_zero(comp)
            else:
                pair = companion_trace_zero(p)
            idxs = [i]
            R = None
        else:
            # extension-field constructions, lifted through the companion map
            p = blocks[item[1]].poly if kind != "ext_diag" else blocks[item[1][0]].poly
            from .fields import extend

            L, alpha, embed = extend(field, p)
            if kind == "ext_jordan":
                i = item[1]
                lpair = jordan_block_trace_zero(alpha, blocks[i].size)
                idxs = [i]
            elif kind == "ext_jordan_plus":
                i, j = item[1], item[2]
                lpair = jordan_plus_scalar_trace_zero(alpha, blocks[i].size, alpha)
                idxs = [i, j]
            else:
                idxs = list(item[1])
                lpair = diagonal_trace_zero([alpha] * len(idxs))
            t1 = companion_lift(lpair.t1, p)
            t2 = companion_lift(lpair.t2, p)
            tgt = companion_lift(lpair.target, p)
            pair = _checked_pair(t1, t2, tgt)
            R = None
        task_pairs.append(pair)
        covered.append(idxs)
        fixups.append(R)

    flat = [i for idxs in covered for i in idxs]
    if sorted(flat) != list(range(len(blocks))):
        raise VerificationFailed("task planner failed to cover every Jordan block")
    # permutation sending the Jordan realization layout to the task layout
    spans = []
    off = 0
    for spec in blocks:
        size = spec.size * spec.degree
        spans.append(range(off, off + size))
        off += size
    order = [pos for idxs in covered for i in idxs for pos in spans[i]]
    Pi = Matrix.permutation(field, order)
    Rall = Matrix.block_diag(field, [
        fix if fix is not None else Matrix.identity(field, task_pairs[t].target.nrows)
        for t, fix in enumerate(fixups)])
    G = Rall * Pi * jf.conjugator
    mid = Matrix.block_diag(field, [pr.target for pr in task_pairs])
    if not (G * A * G.inverse()).allclose(mid):
        raise VerificationFailed("task assembly conjugation failed")
    return list(zip(task_pairs, covered)), G


# ----------------------------------------------------------------------
# single commutators
# ----------------------------------------------------------------------

def trace_zero_to_commutator(T: Matrix, seed: int = 0) -> Tuple[Matrix, Matrix]:
    """(X, Y) with X*Y - Y*X = T, for trace(T) = 0."""
    field = T.field
    n = T.nrows
    if not T.trace().is_zero():
        raise NonzeroTrace("commutators have trace zero")
    if T.is_zero():
        z = Matrix.zeros(field, n, n)
        return z, z
    if n >= 2 and _is_scalar(T):
        return _scalar_commutator(T)
    split = _component_commutator(T, seed)
    if split is not None:
        return split
    got = _zero_diag_commutator(T)
    if got is not None:
        return got
    return _commutator_linear_search(T, seed)


def _support_components(T: Matrix) -> list:
    """Connected components of the symmetric nonzero-support graph."""
    n = T.nrows
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(n):
            if i != j and (not T.rows[i][j].is_zero() or not T.rows[j][i].is_zero()):
                parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def _component_commutator(T: Matrix, seed: int):
    """Solve per support component when every component has trace zero;
    the diagonal matrix of the [D, B] step then only needs distinct values
    inside each component, which rescues small fields."""
    field = T.field
    n = T.nrows
    comps = _support_components(T)
    if len(comps) <= 1:
        return None
    for comp in comps:
        tr = field.zero()
        for i in comp:
            tr = tr + T.rows[i][i]
        if not tr.is_zero():
            return None
    zero = field.zero()
    x_rows = [[zero] * n for _ in range(n)]
    y_rows = [[zero] * n for _ in range(n)]
    for comp in comps:
        sub = Matrix(field, [[T.rows[i][j] for j in comp] for i in comp])
        Xc, Yc = trace_zero_to_commutator(sub, seed)
        for a, i in enumerate(comp):
            for b, j in enumerate(comp):
                x_rows[i][j] = Xc.rows[a][b]
                y_rows[i][j] = Yc.rows[a][b]
    X, Y = Matrix(field, x_rows), Matrix(field, y_rows)
    if not (X * Y - Y * X).allclose(T):
        raise VerificationFailed("component-wise commutator failed to verify")
    return X, Y


def _is_scalar(T: Matrix) -> bool:
    c = T.rows[0][0]
    ident = Matrix.identity(T.field, T.nrows)
    return T.allclose(ident.scale(c))


def _scalar_commutator(T: Matrix) -> Tuple[Matrix, Matrix]:
    """c*I = [shift, weighted shift]; possible exactly when char | n, which
    trace zero already forces for a nonzero scalar."""
    field = T.field
    n = T.nrows
    c = T.rows[0][0]
    zero = field.zero()
    x_rows = [[zero] * n for _ in range(n)]
    y_rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        x_rows[(i + 1) % n][i] = field.one()
        y_rows[i][(i + 1) % n] = -(field(i + 1) * c)
    X, Y = Matrix(field, x_rows), Matrix(field, y_rows)
    if not (X * Y - Y * X).allclose(T):
        raise WitnessNotFound("scalar commutator formula failed (characteristic?)")
    return X, Y


def _zero_diag_commutator(T: Matrix):
    field = T.field
    n = T.nrows
    if field.is_finite and field.cardinality < n:
        return None  # no n distinct diagonal values available
    res = _zero_diagonalize(T)
    if res is None:
        return None
    S, Z = res
    if field.is_finite:
        dvals = []
        for e in enumerate_elements(field):
            dvals.append(e)
            if len(dvals) == n:
                break
    else:
        dvals = [field(i) for i in range(n)]
    D = Matrix.diagonal(field, dvals)
    zero = field.zero()
    b_rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                b_rows[i][j] = Z.rows[i][j] / (dvals[i] - dvals[j])
    B = Matrix(field, b_rows)
    Si = S.inverse()
    X, Y = Si * D * S, Si * B * S
    if not (X * Y - Y * X).allclose(T):
        raise VerificationFailed("zero-diagonal commutator failed to verify")
    return X, Y


def _zero_diagonalize(T: Matrix):
    """(S, Z) with Z = S T S^-1 of zero diagonal, via 2x2 shear merges.
    Returns None when the merge loop gets stuck (tiny-field pathologies)."""
    field = T.field
    n = T.nrows
    Z = T
    S = Matrix.identity(field, n)
    ident = S

    def shear(r, s, lam):
        nonlocal Z, S
        E = ident + Matrix.unit(field, n, r, s).scale(lam)
        Einv = ident - Matrix.unit(field, n, r, s).scale(lam)
        Z = E * Z * Einv
        S = E * S

    budget = 8 * n * n + 16
    while budget > 0:
        budget -= 1
        diag = [Z.rows[i][i] for i in range(n)]
        nonzero = [i for i in range(n) if not diag[i].is_zero()]
        if not nonzero:
            return S, Z
        action = None
        # merges first: both diagonal entries nonzero
        for i in nonzero:
            for j in range(n):
                if j == i or diag[j].is_zero():
                    continue
                if _pair_feasible(Z, i, j):
                    action = (i, j)
                    break
            if action:
                break
        if action is None:
            for i in nonzero:
                for j in range(n):
                    if j == i or not diag[j].is_zero():
                        continue
                    if _pair_feasible(Z, i, j):
                        action = (i, j)
                        break
                if action:
                    break
        if action is None:
            return None
        i, j = action
        a, b = Z.rows[i][i], Z.rows[i][j]
        d = Z.rows[j][i]
        if b.is_zero() and d.is_zero():
            shear(i, j, field.one())  # creates coupling since diag entries differ
            b = Z.rows[i][j]
        a = Z.rows[i][i]
        b = Z.rows[i][j]
        d = Z.rows[j][i]
        if not b.is_zero():
            shear(j, i, a / b)
        elif not d.is_zero():
            shear(i, j, -(a / d))
        else:
            return None
    return None


def _pair_feasible(Z: Matrix, i: int, j: int) -> bool:
    coupled = (not Z.rows[i][j].is_zero()) or (not Z.rows[j][i].is_zero())
    return coupled or Z.rows[i][i] != Z.rows[j][j]


def _solve_partner(X: Matrix, T: Matrix):
    """Y with X*Y - Y*X = T, if T lies in the image of ad_X."""
    field = T.field
    n = T.nrows
    zero = field.zero()
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            row = [zero] * (n * n)
            for l in range(n):
                row[l * n + j] = row[l * n + j] + X.rows[i][l]
            for k in range(n):
                row[i * n + k] = row[i * n + k] - X.rows[k][j]
            rows.append(row)
            rhs.append(T.rows[i][j])
    sol = Matrix(field, rows).solve_right(rhs)
    if sol is None:
        return None
    Y = Matrix(field, [sol[i * n:(i + 1) * n] for i in range(n)])
    if (X * Y - Y * X).allclose(T):
        return Y
    return None


def _moments_vanish(X: Matrix, T: Matrix) -> bool:
    """trace(T * X^j) = 0 for j < n: necessary for T in im(ad_X), and also
    sufficient when X is non-derogatory.  Early exit keeps rejection cheap."""
    n = T.nrows
    P = T
    for _ in range(n - 1):
        P = P * X
        if not P.trace().is_zero():
            return False
    return True


def _commutator_linear_search(T: Matrix, seed: int) -> Tuple[Matrix, Matrix]:
    """Drive the linear system [X, Y] = T over a stream of mostly-cyclic
    candidates; a random candidate admits a partner with probability about
    q^{1-n}, so the stream is long and rejections are prechecked cheaply."""
    field = T.field
    n = T.nrows
    rng = random.Random(seed)
    from .matrices import _random_element

    def shear(M):
        i = rng.randrange(n)
        j = (i + 1 + rng.randrange(n - 1)) % n
        lam = _random_element(field, rng)
        E = Matrix.identity(field, n) + Matrix.unit(field, n, i, j).scale(lam)
        Einv = Matrix.identity(field, n) - Matrix.unit(field, n, i, j).scale(lam)
        return E * M * Einv

    def candidates():
        yield Matrix.cyclic_shift(field, n)
        yield Matrix.companion(charpoly(T))
        while True:
            coeffs = [_random_element(field, rng) for _ in range(n)] + [field.one()]
            C = Matrix.companion(Poly(field, coeffs))
            yield C
            yield shear(shear(C))
            yield Matrix(field, [
                [_random_element(field, rng) for _ in range(n)] for _ in range(n)])

    if field.is_finite:
        # success odds per cyclic candidate are about q^(1-n)
        tries = min(24000, max(2000, 24 * field.cardinality ** max(0, n - 1)))
    else:
        tries = 64
    stream = candidates()
    for _ in range(tries):
        X = next(stream)
        if not _moments_vanish(X, T):
            continue
        Y = _solve_partner(X, T)
        if Y is not None:
            return X, Y
    raise WitnessNotFound("no commutator witness found in the fallback family")


# ----------------------------------------------------------------------
# products of commutators
# ----------------------------------------------------------------------

def solve_commutator_product(A: Matrix, m: int, seed: int = 0) -> Witness:
    """Witness (X_1..X_m) with [X1,X2]...[X_{m-1},X_m] = A; m even.

    m = 2 requires trace(A) = 0 (the exact image of the commutator map);
    m >= 4 covers all of M_n(K) for n >= 2 over the supported perfect fields.
    """
    word = CommutatorProduct(m)
    field = A.field
    n = A.nrows
    if n != A.ncols:
        raise UsageError("square matrix expected")
    if m == 2 and not A.trace().is_zero():
        raise NonzeroTrace("target has nonzero trace")
    if field.is_exact and n >= 2 and not A.is_zero():
        jf = generalized_jordan_form(A, seed)
        G = jf.conjugator
        M = jf.realization
    else:
        G = Matrix.identity(field, n)
        M = A
    Gi = G.inverse()
    if m == 2:
        x, y = trace_zero_to_commutator(M, seed)
        mats = [Gi * x * G, Gi * y * G]
        return make_witness(word, A, mats, conjugators=(G,))
    peel = (m - 4) // 2
    mats_mid: List[Matrix] = []
    if peel:
        if n < 2:
            raise Unsupported("peeling needs n >= 2")
        U = Matrix.cyclic_shift(field, n)
        xu, yu = trace_zero_to_commutator(U, seed)
        rest_target = (U.inverse() ** peel) * M
        for _ in range(peel):
            mats_mid.extend([xu, yu])
    else:
        rest_target = M
    u, v, G2, _ = _factor_two_canonical(rest_target, seed)
    G2i = G2.inverse()
    x1, x2 = trace_zero_to_commutator(u, seed)
    x3, x4 = trace_zero_to_commutator(v, seed)
    mats_mid.extend([G2i * x * G2 for x in (x1, x2, x3, x4)])
    mats = [Gi * x * G for x in mats_mid]
    return make_witness(word, A, mats, conjugators=(G, G2))
