"""Reduction of a matrix word equation to Jordan blocks over extensions.

Splitting a target by its generalized Jordan form, solving each block
J_{alpha,l} over K(alpha), lifting the block witnesses back through the
companion-lift homomorphism, and conjugating the assembled block-diagonal
solution by the Jordan conjugator solves the original equation.  Over R a
quadratic factor is handled through C and lifted back to real 2x2 blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .errors import VerificationFailed
from .fields import Field, FieldElement
from .matrices import (
    GeneralizedJordanForm,
    Matrix,
    companion_lift,
    generalized_jordan_form,
)
from .polynomials import Poly, approx_roots
from .words import Witness, make_witness


@dataclass
class BlockPlan:
    """One Jordan block of the target, moved to its working field."""

    poly: Poly                     # irreducible factor over the base field
    size: int                      # l, number of companion copies
    field: Field                   # K(alpha), or the base field when deg = 1
    alpha: FieldElement            # the eigenvalue in the working field
    embed: Optional[Callable]      # base -> working field (None when identity)
    target: Matrix                 # J_{alpha, l} over the working field
    complex_root: Optional[complex]  # chosen root for the R -> C route
    span: Tuple[int, int]          # column range inside the realization
    solution: Optional[Tuple[Matrix, ...]] = None


@dataclass
class ReductionPlan:
    base_field: Field
    target: Matrix
    jordan: GeneralizedJordanForm
    blocks: List[BlockPlan]


def plan(A: Matrix, seed: int = 0) -> ReductionPlan:
    """Jordan-split A; one BlockPlan per block, extensions built as needed."""
    field = A.field
    jf = generalized_jordan_form(A, seed)
    blocks = []
    ext_cache = {}
    offset = 0
    for spec in jf.blocks:
        p, l, d = spec.poly, spec.size, spec.degree
        span = (offset, offset + l * d)
        offset += l * d
        if d == 1:
            alpha = spec.alpha
            blocks.append(BlockPlan(p, l, field, alpha, None,
                                    Matrix.jordan_block(alpha, l), None, span))
            continue
        if field.is_exact:
            key = tuple(c.rep for c in p.coeffs)
            if key not in ext_cache:
                from .fields import extend

                ext_cache[key] = extend(field, p)
            L, alpha, embed = ext_cache[key]
            blocks.append(BlockPlan(p, l, L, alpha, embed,
                                    Matrix.jordan_block(alpha, l), None, span))
        else:
            # real base, quadratic factor: work over C with a chosen root
            from .fields import Field as F

            L = ext_cache.get("C")
            if L is None:
                L = F("complex", tolerance=field.tolerance)
                ext_cache["C"] = L
            root = _quadratic_complex_root(p)
            alpha = L(root)
            blocks.append(BlockPlan(p, l, L, alpha, lambda x, L=L: L(complex(x.rep)),
                                    Matrix.jordan_block(alpha, l), root, span))
    return ReductionPlan(field, A, jf, blocks)


def _quadratic_complex_root(p: Poly) -> complex:
    roots = approx_roots(p)
    for r in roots:
        if r.imag > 0:
            return r
    return roots[0]


def assemble(rplan: ReductionPlan, word, conjugators_extra=()) -> Witness:
    """Lift the per-block solutions, direct-sum them per word position, and
    conjugate back; the word is re-evaluated against the original target."""
    field = rplan.base_field
    arity = word.arity
    for bp in rplan.blocks:
        if bp.solution is None:
            raise VerificationFailed("assemble called before every block was solved")
        if len(bp.solution) != arity:
            raise VerificationFailed("block solution arity mismatch")
    per_position = []
    for pos in range(arity):
        lifted = []
        for bp in rplan.blocks:
            W = bp.solution[pos]
            if bp.field.key == field.key:
                lifted.append(W)
            else:
                lifted.append(companion_lift(W, bp.poly, bp.complex_root))
        per_position.append(Matrix.block_diag(field, lifted))
    P = rplan.jordan.conjugator
    Pinv = P.inverse()
    mats = [Pinv * M * P for M in per_position]
    return make_witness(word, rplan.target, mats,
                        conjugators=(P,) + tuple(conjugators_extra))


def solve_blockwise(A: Matrix, word, block_solver: Callable[[BlockPlan], tuple],
                    seed: int = 0) -> Witness:
    """plan -> per-block solve -> assemble, verifying the final identity."""
    rplan = plan(A, seed)
    for bp in rplan.blocks:
        bp.solution = tuple(block_solver(bp))
    return assemble(rplan, word)
