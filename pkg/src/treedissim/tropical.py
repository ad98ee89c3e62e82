"""Min-plus / max-plus primitives and membership predicates.

Everything here reduces to one combinatorial test: a max-plus expression
"vanishes tropically" when its maximum is attained at least twice.
``four_point_check`` and ``is_ultrametric`` apply the test to distance
matrices, ``three_term_plucker_check`` to dissimilarity tensors.

All predicates return a :class:`Verdict` rather than raising, and report
the lexicographically first violation so failures are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Any, Mapping, Sequence, Tuple


@dataclass(frozen=True)
class Verdict:
    """Outcome of a membership predicate.

    ``witness`` is the first violating index tuple in lexicographic
    order and ``values`` holds the compared quantities, so every failure
    can be recomputed from the input.  Passing verdicts carry no
    witness; ``note`` marks vacuous passes.
    """

    passed: bool
    witness: tuple | None = None
    values: tuple | None = None
    note: str | None = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class TropTerm:
    """One term ``coeff + sum(a_x * point[x])`` of a max-plus polynomial."""

    coeff: Fraction
    exponents: Mapping[Any, int]


def max_twice(values: Sequence[Fraction]) -> bool:
    """True iff the maximum of ``values`` occurs at two or more positions."""
    if len(values) == 0:
        raise ValueError("max_twice needs a non-empty sequence")
    top = max(values)
    hits = 0
    for v in values:
        if v == top:
            hits += 1
            if hits == 2:
                return True
    return False


def eval_trop_poly(
    terms: Sequence[TropTerm], point: Mapping[Any, Fraction]
) -> Tuple[Fraction, Tuple[int, ...]]:
    """Evaluate a max-plus polynomial at ``point``.

    Returns ``(value, argmax)`` where ``argmax`` lists the indices of all
    maximizing terms.  The point lies on the tropical hypersurface of the
    polynomial iff ``len(argmax) >= 2``.
    """
    if len(terms) == 0:
        raise ValueError("eval_trop_poly needs at least one term")
    best = None
    argmax: list[int] = []
    for idx, term in enumerate(terms):
        total = Fraction(term.coeff)
        for coord, a in term.exponents.items():
            if coord not in point:
                raise ValueError(f"point is missing coordinate {coord!r}")
            total += a * point[coord]
        if best is None or total > best:
            best = total
            argmax = [idx]
        elif total == best:
            argmax.append(idx)
    return best, tuple(argmax)


def _pairing_sums(D, i: int, j: int, k: int, l: int) -> tuple:
    return (
        D.get(i, j) + D.get(k, l),
        D.get(i, k) + D.get(j, l),
        D.get(i, l) + D.get(j, k),
    )


def four_point_check(D, strict: bool = False) -> Verdict:
    """Check the four-point condition on a distance matrix.

    For every quadruple the maximum of the three pairing sums
    ``D(i,j)+D(k,l), D(i,k)+D(j,l), D(i,l)+D(j,k)`` must be attained at
    least twice.  With ``strict=False`` quadruples may repeat elements,
    which folds in non-negativity and the triangle inequality (the full
    tree-metric test); ``strict=True`` restricts to distinct quadruples
    (the tropical-hypersurface reading, which tolerates negative
    entries).
    """
    labels = range(1, D.n + 1)
    quads = combinations(labels, 4) if strict else combinations_with_replacement(labels, 4)
    seen = False
    for q in quads:
        seen = True
        vals = _pairing_sums(D, *q)
        if not max_twice(vals):
            return Verdict(False, witness=q, values=vals)
    if not seen:
        return Verdict(True, note=f"no quadruple of distinct labels for n={D.n}; vacuous")
    return Verdict(True)


def is_ultrametric(D) -> Verdict:
    """Check that D is an ultrametric.

    Entries must be non-negative and in every triple the maximum of
    ``D(i,j), D(i,k), D(j,k)`` must be attained at least twice
    (equivalently ``D(i,j) <= max(D(i,k), D(j,k))``).
    """
    labels = range(1, D.n + 1)
    for i, j in combinations(labels, 2):
        v = D.get(i, j)
        if v < 0:
            return Verdict(False, witness=(i, j), values=(v,), note="negative entry")
    for i, j, k in combinations(labels, 3):
        vals = (D.get(i, j), D.get(i, k), D.get(j, k))
        if not max_twice(vals):
            return Verdict(False, witness=(i, j, k), values=vals)
    return Verdict(True)


def three_term_plucker_check(W) -> Verdict:
    """Check the three-term tropical Plucker relations on a tensor.

    For every (m-2)-subset R and distinct i<j<k<l outside R, the maximum
    of ``W(R+ij)+W(R+kl), W(R+ik)+W(R+jl), W(R+il)+W(R+jk)`` must be
    attained at least twice.  With n < m+2 no such quadruple exists and
    the check passes vacuously (flagged in the note).
    """
    n, m = W.n, W.m
    if n < m + 2:
        return Verdict(True, note=f"no quadruple outside an (m-2)-set for n={n}, m={m}; vacuous")
    labels = range(1, n + 1)
    for R in combinations(labels, m - 2):
        rset = set(R)
        rest = [x for x in labels if x not in rset]
        for i, j, k, l in combinations(rest, 4):
            vals = (
                W.value(R + (i, j)) + W.value(R + (k, l)),
                W.value(R + (i, k)) + W.value(R + (j, l)),
                W.value(R + (i, l)) + W.value(R + (j, k)),
            )
            if not max_twice(vals):
                return Verdict(False, witness=(R, (i, j, k, l)), values=vals)
    return Verdict(True)


def in_Tmn(W, m: int, n: int) -> Verdict:
    """Short name for :func:`three_term_plucker_check` with explicit
    dimensions; ``m`` and ``n`` must match the tensor."""
    if W.m != m or W.n != n:
        raise ValueError(
            f"tensor has m={W.m}, n={W.n} but the check was asked for m={m}, n={n}"
        )
    return three_term_plucker_check(W)
