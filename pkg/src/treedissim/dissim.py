"""Subset dissimilarity maps and their membership machinery.

The central operation sends a distance matrix D to the tensor whose
entry on an m-subset is half the minimum, over all cyclic orders of the
subset, of the closed-tour sum of pairwise distances.  For tree metrics
this equals the weight of the minimal subtree spanning the subset.

The module also provides the closed-form m=3 map and its exact linear
inversion, the full m=3 membership decision (invert, then four-point),
the rerooting construction that turns a tree metric into an ultrametric
away from the last leaf, and the m=4 pairing map / agreement subspace /
projection characterization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Iterable, Sequence

from .rationals import format_rational, parse_rational
from .tropical import Verdict, four_point_check, max_twice, three_term_plucker_check
from .trees import DistanceMatrix, WeightedTree, reconstruct_tree


class InversionError(Exception):
    """The tensor has no preimage; carries a witness triple when known."""

    def __init__(self, message: str, witness: tuple | None = None, values: tuple | None = None):
        self.witness = witness
        self.values = values
        super().__init__(message)


@dataclass
class DissimTensor:
    """Rational map on the m-subsets of [n].

    Entries are keyed on sorted m-tuples and must cover every m-subset.
    ``value`` accepts any ordering and returns 0 for arguments with
    repeated indices, which are by convention not stored.
    """

    n: int
    m: int
    entries: dict[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        if not 2 <= self.m <= self.n:
            raise ValueError(f"need 2 <= m <= n, got m={self.m}, n={self.n}")
        expected = set(combinations(range(1, self.n + 1), self.m))
        if set(self.entries) != expected:
            bad = sorted(set(self.entries) ^ expected)[:3]
            raise ValueError(f"entries must cover exactly the {self.m}-subsets of 1..{self.n}; mismatch near {bad}")
        self.entries = {k: Fraction(v) for k, v in sorted(self.entries.items())}

    def value(self, subset: Iterable[int]) -> Fraction:
        key = tuple(sorted(subset))
        if len(key) != self.m:
            raise ValueError(f"expected {self.m} indices, got {len(key)}")
        if len(set(key)) < self.m:
            return Fraction(0)
        return self.entries[key]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "entries": {
                ",".join(map(str, key)): format_rational(v) for key, v in self.entries.items()
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DissimTensor":
        if not isinstance(obj, dict) or not {"n", "m", "entries"} <= set(obj):
            raise ValueError("tensor JSON needs keys 'n', 'm' and 'entries'")
        n, m = obj["n"], obj["m"]
        if not (isinstance(n, int) and isinstance(m, int)):
            raise ValueError("'n' and 'm' must be integers")
        entries = {}
        for key, val in obj["entries"].items():
            idx = tuple(int(p) for p in key.split(","))
            if list(idx) != sorted(set(idx)) or len(idx) != m:
                raise ValueError(f"bad subset key {key!r}: need {m} strictly increasing indices")
            if idx[0] < 1 or idx[-1] > n:
                raise ValueError(f"subset key {key!r} out of range 1..{n}")
            entries[idx] = parse_rational(val)
        return cls(n, m, entries)


@dataclass
class PairingPoint:
    """Point in pairing-sum coordinates on ordered pairs of disjoint pairs.

    One coordinate per ordered pair of disjoint unordered pairs
    ({i,j}, {k,l}); swapping elements inside a pair is the identity,
    swapping the two pairs is not.  A quadruple therefore owns six
    coordinates.
    """

    n: int
    entries: dict[tuple[tuple[int, int], tuple[int, int]], Fraction]

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValueError("pairing coordinates need n >= 4")
        expected = set(_pair_pairs(self.n))
        if set(self.entries) != expected:
            bad = sorted(set(self.entries) ^ expected)[:3]
            raise ValueError(f"entries must cover all ordered disjoint pair-pairs; mismatch near {bad}")
        self.entries = {k: Fraction(v) for k, v in sorted(self.entries.items())}

    def get(self, first: Sequence[int], second: Sequence[int]) -> Fraction:
        a = tuple(sorted(first))
        b = tuple(sorted(second))
        return self.entries[(a, b)]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "entries": {
                f"{p[0]},{p[1]};{q[0]},{q[1]}": format_rational(v)
                for (p, q), v in self.entries.items()
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PairingPoint":
        if not isinstance(obj, dict) or not {"n", "entries"} <= set(obj):
            raise ValueError("pairing JSON needs keys 'n' and 'entries'")
        n = obj["n"]
        entries = {}
        for key, val in obj["entries"].items():
            halves = key.split(";")
            if len(halves) != 2:
                raise ValueError(f"bad pairing key {key!r}")
            p = tuple(int(x) for x in halves[0].split(","))
            q = tuple(int(x) for x in halves[1].split(","))
            if len(p) != 2 or len(q) != 2 or p[0] >= p[1] or q[0] >= q[1] or set(p) & set(q):
                raise ValueError(f"bad pairing key {key!r}: need disjoint sorted pairs")
            entries[(p, q)] = parse_rational(val)
        return cls(n, entries)


def _pair_pairs(n: int):
    labels = range(1, n + 1)
    for p in combinations(labels, 2):
        rest = [x for x in labels if x not in p]
        for q in combinations(rest, 2):
            yield (p, q)


# ---------------------------------------------------------------------------
# The tour-minimum dissimilarity map


def _scaled_submatrix(D: DistanceMatrix, subset: Sequence[int]) -> tuple[list[list[int]], int]:
    """Integer-rescaled pairwise entries over ``subset`` plus the common
    denominator, so tour sums run on machine integers."""
    m = len(subset)
    denom = 1
    for a, b in combinations(subset, 2):
        denom = lcm(denom, D.get(a, b).denominator)
    e = [[0] * m for _ in range(m)]
    for ai in range(m):
        for bi in range(ai + 1, m):
            v = D.get(subset[ai], subset[bi])
            scaled = v.numerator * (denom // v.denominator)
            e[ai][bi] = scaled
            e[bi][ai] = scaled
    return e, denom


def _min_tour_int(e: list[list[int]]) -> int:
    m = len(e)
    row0 = e[0]
    best = None
    for p in permutations(range(1, m)):
        if p[0] > p[-1]:  # each tour once: skip the reversal
            continue
        total = row0[p[0]] + row0[p[-1]]
        prev = p[0]
        for cur in p[1:]:
            total += e[prev][cur]
            prev = cur
        if best is None or total < best:
            best = total
    return best


def _min_tour_dp_int(e: list[list[int]]) -> int:
    m = len(e)
    big = (sum(abs(x) for row in e for x in row) + 1) * (m + 2)
    size = 1 << (m - 1)
    dp = [[big] * m for _ in range(size)]
    for j in range(1, m):
        dp[1 << (j - 1)][j] = e[0][j]
    for mask in range(1, size):
        row = dp[mask]
        for j in range(1, m):
            cur = row[j]
            if cur >= big or not mask & (1 << (j - 1)):
                continue
            ej = e[j]
            for k in range(1, m):
                kb = 1 << (k - 1)
                if mask & kb:
                    continue
                cand = cur + ej[k]
                if cand < dp[mask | kb][k]:
                    dp[mask | kb][k] = cand
    full = size - 1
    return min(dp[full][j] + e[j][0] for j in range(1, m))


def subset_dissimilarity(
    D: DistanceMatrix,
    subset: Iterable[int],
    method: str = "auto",
    dp_threshold: int = 6,
) -> Fraction:
    """Half the minimum closed-tour sum over cyclic orders of ``subset``.

    ``method`` selects the evaluator: "tours" enumerates the (m-1)!/2
    tours up to reversal, "dp" runs a bitmask dynamic program
    over sub-subsets, "auto" switches to the DP above ``dp_threshold``.
    Both evaluators are exact and agree on every input.
    """
    subset = tuple(sorted(subset))
    m = len(subset)
    if m < 2:
        raise ValueError("subset needs at least 2 elements")
    if len(set(subset)) < m:
        raise ValueError("subset has repeated elements")
    if m == 2:
        return D.get(subset[0], subset[1])
    e, denom = _scaled_submatrix(D, subset)
    if method == "auto":
        method = "tours" if m <= dp_threshold else "dp"
    if method == "tours":
        best = _min_tour_int(e)
    elif method == "dp":
        best = _min_tour_dp_int(e)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Fraction(best, 2 * denom)


def dissimilarity_map(
    D: DistanceMatrix, m: int, method: str = "auto", dp_threshold: int = 6
) -> DissimTensor:
    """The m-subset dissimilarity tensor of a distance matrix."""
    n = D.n
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= n, got m={m}, n={n}")
    entries = {
        subset: subset_dissimilarity(D, subset, method, dp_threshold)
        for subset in combinations(range(1, n + 1), m)
    }
    return DissimTensor(n, m, entries)


def tour_minimizers(
    D: DistanceMatrix, subset: Iterable[int]
) -> tuple[Fraction, tuple[tuple[int, ...], ...]]:
    """Entry value plus every minimizing cyclic order of ``subset``.

    Tours are reported as element tuples starting at the smallest
    element; all (m-1)! cyclic orders are examined, so the returned set
    is literally closed under reversal whenever the minimum is.
    """
    subset = tuple(sorted(subset))
    m = len(subset)
    if m < 2 or len(set(subset)) < m:
        raise ValueError("subset must have at least 2 distinct elements")
    if m == 2:
        return D.get(subset[0], subset[1]), (subset,)
    e, denom = _scaled_submatrix(D, subset)
    row0 = e[0]
    best: int | None = None
    argmin: list[tuple[int, ...]] = []
    for p in permutations(range(1, m)):
        total = row0[p[0]] + row0[p[-1]]
        prev = p[0]
        for cur in p[1:]:
            total += e[prev][cur]
            prev = cur
        if best is None or total < best:
            best = total
            argmin = [p]
        elif total == best:
            argmin.append(p)
    tours = tuple(
        sorted((subset[0],) + tuple(subset[i] for i in p) for p in argmin)
    )
    return Fraction(best, 2 * denom), tours


@dataclass(frozen=True)
class CycleSum:
    """One closed tour of a subset together with its pairwise sum."""

    subset: tuple[int, ...]
    tour: tuple[int, ...]
    value: Fraction


def cycle_sum(D: DistanceMatrix, tour: Sequence[int]) -> CycleSum:
    """Sum of consecutive entries around the closed tour.

    Reversing the tour gives the same value, so half of all cyclic
    orders already realizes every achievable sum.
    """
    tour = tuple(tour)
    if len(tour) < 2 or len(set(tour)) < len(tour):
        raise ValueError("tour must visit at least 2 distinct elements")
    total = sum(
        (D.get(tour[i], tour[(i + 1) % len(tour)]) for i in range(len(tour))),
        Fraction(0),
    )
    return CycleSum(tuple(sorted(tour)), tour, total)


def subset_cherries(D: DistanceMatrix, subset: Iterable[int]) -> tuple[tuple[int, int], ...]:
    """Pairs of ``subset`` that form a cherry of the induced subtree.

    A pair (a, b) qualifies iff D(a,c) - D(b,c) is constant over the
    remaining elements c, i.e. all other paths enter the a-b path at one
    common point.
    """
    subset = tuple(sorted(subset))
    if len(subset) < 3:
        raise ValueError("cherry detection needs at least 3 elements")
    found = []
    for a, b in combinations(subset, 2):
        rest = [c for c in subset if c != a and c != b]
        delta = D.get(a, rest[0]) - D.get(b, rest[0])
        if all(D.get(a, c) - D.get(b, c) == delta for c in rest[1:]):
            found.append((a, b))
    return tuple(found)


# ---------------------------------------------------------------------------
# m = 3: closed form, inversion, membership


def triple_dissimilarity(D: DistanceMatrix) -> DissimTensor:
    """Closed-form m=3 tensor: half the perimeter of each triple."""
    n = D.n
    if n < 3:
        raise ValueError("triple dissimilarity needs n >= 3")
    entries = {
        (i, j, k): (D.get(i, j) + D.get(i, k) + D.get(j, k)) / 2
        for i, j, k in combinations(range(1, n + 1), 3)
    }
    return DissimTensor(n, 3, entries)


def _invert3_formula(W: DissimTensor) -> DistanceMatrix:
    # With S_i the row sums of the unknown matrix X, summing the closed
    # form over the free index gives T(i,j) = ((n-4)X(i,j) + S_i + S_j)/2,
    # row-summing gives U_i = (n-3)S_i + total(X), and the grand total
    # gives total(X) = 2*total(W)/(n-2); solving back yields X.
    n = W.n
    labels = range(1, n + 1)
    T = {
        (i, j): sum(
            (W.entries[tuple(sorted((i, j, k)))] for k in labels if k != i and k != j),
            Fraction(0),
        )
        for i, j in combinations(labels, 2)
    }
    total = sum(W.entries.values(), Fraction(0))
    P = 2 * total / (n - 2)
    U = {i: sum((v for key, v in T.items() if i in key), Fraction(0)) for i in labels}
    S = {i: (U[i] - P) / (n - 3) for i in labels}
    entries = {
        (i, j): (2 * T[(i, j)] - S[i] - S[j]) / (n - 4) for i, j in combinations(labels, 2)
    }
    return DistanceMatrix(n, entries)


def _invert3_elimination(W: DissimTensor) -> DistanceMatrix:
    # Exact Gauss-Jordan on the (n choose 3) x (n choose 2) system whose
    # rows say half the triple perimeter equals the tensor entry.
    # Returns the solution of the pivot subsystem; for an inconsistent
    # tensor that candidate fails the caller's forward verification.
    n = W.n
    pairs = list(combinations(range(1, n + 1), 2))
    col = {p: idx for idx, p in enumerate(pairs)}
    half = Fraction(1, 2)
    rows = []
    for triple in combinations(range(1, n + 1), 3):
        coeffs = [Fraction(0)] * len(pairs)
        for p in combinations(triple, 2):
            coeffs[col[p]] = half
        rows.append(coeffs + [W.entries[triple]])
    ncols = len(pairs)
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivot_of_col[c] = r
        r += 1
    if len(pivot_of_col) < ncols:
        raise InversionError(
            f"system is rank deficient ({len(pivot_of_col)} pivots for {ncols} unknowns)"
        )
    # inconsistent surplus rows are not checked here: the caller verifies
    # the candidate by mapping forward, which names the failing triple
    entries = {p: rows[pivot_of_col[col[p]]][ncols] for p in pairs}
    return DistanceMatrix(n, entries)


def invert_triple_dissimilarity(W: DissimTensor, method: str = "formula") -> DistanceMatrix:
    """Recover the unique matrix whose triple dissimilarity is W.

    Needs n >= 5; for n <= 4 the linear system has a nontrivial kernel
    and no unique preimage exists.  The closed-form path is validated
    against the exact elimination path (kept available via
    ``method="elimination"``).  The result is always verified by mapping
    forward again; a mismatch raises :class:`InversionError` with the
    first failing triple.
    """
    if W.m != 3:
        raise ValueError("inversion needs an m=3 tensor")
    n = W.n
    if n <= 4:
        raise ValueError(f"inversion needs n >= 5; the n={n} system is underdetermined")
    if method == "formula":
        X = _invert3_formula(W)
    elif method == "elimination":
        X = _invert3_elimination(W)
    else:
        raise ValueError(f"unknown method {method!r}")
    back = triple_dissimilarity(X)
    for key in combinations(range(1, n + 1), 3):
        if back.entries[key] != W.entries[key]:
            raise InversionError(
                f"tensor is not a triple dissimilarity: mismatch at {key}",
                witness=key,
                values=(back.entries[key], W.entries[key]),
            )
    return X


@dataclass(frozen=True)
class Membership3Result:
    """Decision for an m=3 tensor against the image of tree space.

    ``stage`` records where the decision fell: "inverse" (no linear
    preimage), "four_point" (preimage exists but violates the strict
    four-point condition), or "ok".  On membership, ``matrix`` is the
    preimage and ``tree`` its realization when the preimage is a genuine
    non-negative metric (otherwise None, see ``note``).
    """

    is_member: bool
    stage: str
    matrix: DistanceMatrix | None = None
    tree: WeightedTree | None = None
    witness: tuple | None = None
    values: tuple | None = None
    note: str | None = None

    def __bool__(self) -> bool:
        return self.is_member


def _check_plucker_fails_with_any_anchor(W: DissimTensor, quad: tuple) -> None:
    # A four-point failure of the preimage must show up as a three-term
    # relation failure for every anchor S, because the three anchored
    # sums differ from the pairing sums by a common S-dependent shift.
    i, j, k, l = quad
    for s in range(1, W.n + 1):
        if s in quad:
            continue
        vals = (
            W.value((s, i, j)) + W.value((s, k, l)),
            W.value((s, i, k)) + W.value((s, j, l)),
            W.value((s, i, l)) + W.value((s, j, k)),
        )
        if max_twice(vals):
            raise RuntimeError(
                f"internal inconsistency: anchored relation passes at S={s}, quadruple {quad}"
            )


def triple_membership(W: DissimTensor, cross_check: bool = True) -> Membership3Result:
    """Decide whether an m=3 tensor is the triple dissimilarity of a tree.

    Inverts the linear system, then applies the strict four-point check
    to the preimage.  With ``cross_check`` the verdict is corroborated:
    members must pass the three-term relations, and a four-point failure
    must reproduce as an anchored three-term failure for every choice of
    fifth index.
    """
    if W.m != 3:
        raise ValueError("membership needs an m=3 tensor")
    if W.n < 5:
        raise ValueError("membership decision needs n >= 5")
    try:
        X = invert_triple_dissimilarity(W)
    except InversionError as exc:
        return Membership3Result(
            False, "inverse", witness=exc.witness, values=exc.values, note=str(exc)
        )
    verdict = four_point_check(X, strict=True)
    if not verdict:
        if cross_check:
            _check_plucker_fails_with_any_anchor(W, verdict.witness)
        return Membership3Result(
            False, "four_point", matrix=X, witness=verdict.witness, values=verdict.values
        )
    tree = None
    note = None
    if four_point_check(X, strict=False):
        tree = reconstruct_tree(X)
    else:
        note = (
            "preimage satisfies the four-point condition on distinct quadruples "
            "but is not a non-negative metric; no tree realization emitted"
        )
    if cross_check:
        pv = three_term_plucker_check(W)
        if not pv:
            raise RuntimeError(
                f"internal inconsistency: member tensor fails three-term relations at {pv.witness}"
            )
    return Membership3Result(True, "ok", matrix=X, tree=tree, note=note)


# ---------------------------------------------------------------------------
# Rerooting a tree metric into an ultrametric


def reroot_ultrametric(D: DistanceMatrix, E: Fraction) -> DistanceMatrix:
    """Shift a tree metric so the last leaf sits at distance 2E from all.

    D'(i,j) = 2E + D(i,j) - D(i,n) - D(j,n) for i,j < n and
    D'(i,n) = 2E.  Requires E >= max_i D(i,n).  The result is again a
    tree metric and is ultrametric away from leaf n; both facts are
    asserted.
    """
    n = D.n
    E = Fraction(E)
    top = max(D.get(i, n) for i in range(1, n))
    if E < top:
        raise ValueError(f"E must be at least max_i D(i,n) = {top}")
    entries: dict[tuple[int, int], Fraction] = {}
    for i, j in combinations(range(1, n + 1), 2):
        if j == n:
            entries[(i, j)] = 2 * E
        else:
            entries[(i, j)] = 2 * E + D.get(i, j) - D.get(i, n) - D.get(j, n)
    shifted = DistanceMatrix(n, entries)
    verdict = four_point_check(shifted, strict=False)
    if not verdict:
        raise ValueError(
            f"input is not a tree metric: shifted matrix fails at {verdict.witness}"
        )
    if n >= 4:
        from .tropical import is_ultrametric

        uv = is_ultrametric(shifted.restrict(range(1, n)))
        if not uv:
            raise RuntimeError(f"internal inconsistency: shift not ultrametric at {uv.witness}")
    return shifted


# ---------------------------------------------------------------------------
# m = 4 pairing machinery


def pairing_map(D: DistanceMatrix) -> PairingPoint:
    """Map a matrix into pairing-sum coordinates.

    The coordinate on ({i,j},{k,l}) is half of D(i,j) + D(k,l) plus the
    smaller of the two crossing sums.
    """
    n = D.n
    if n < 4:
        raise ValueError("pairing map needs n >= 4")
    entries = {}
    for p, q in _pair_pairs(n):
        i, j = p
        k, l = q
        cross = min(D.get(i, k) + D.get(j, l), D.get(i, l) + D.get(j, k))
        entries[(p, q)] = (D.get(i, j) + D.get(k, l) + cross) / 2
    return PairingPoint(n, entries)


def pairing_agreement(P: PairingPoint) -> Verdict:
    """Check that all six coordinates of every quadruple coincide."""
    for i, j, k, l in combinations(range(1, P.n + 1), 4):
        keys = (
            ((i, j), (k, l)),
            ((i, k), (j, l)),
            ((i, l), (j, k)),
            ((k, l), (i, j)),
            ((j, l), (i, k)),
            ((j, k), (i, l)),
        )
        vals = tuple(P.entries[key] for key in keys)
        if any(v != vals[0] for v in vals[1:]):
            return Verdict(False, witness=(i, j, k, l), values=vals)
    return Verdict(True)


def project_pairings(P: PairingPoint) -> DissimTensor:
    """Collapse an agreeing pairing point to its m=4 tensor."""
    verdict = pairing_agreement(P)
    if not verdict:
        raise ValueError(
            f"point is not in the agreement subspace: quadruple {verdict.witness} disagrees"
        )
    entries = {
        (i, j, k, l): P.entries[((i, j), (k, l))]
        for i, j, k, l in combinations(range(1, P.n + 1), 4)
    }
    return DissimTensor(P.n, 4, entries)


@dataclass(frozen=True)
class QuadrupleReport:
    """Pairing sums of one quadruple and the two equivalent tests on them."""

    quadruple: tuple[int, int, int, int]
    sums: tuple[Fraction, Fraction, Fraction]
    max_attained_twice: bool
    coordinates_equal: bool

    @property
    def equivalence_holds(self) -> bool:
        return self.max_attained_twice == self.coordinates_equal


@dataclass(frozen=True)
class M4Report:
    """Per-quadruple comparison of max-twice versus coordinate agreement."""

    n: int
    quadruples: tuple[QuadrupleReport, ...]

    @property
    def all_equivalent(self) -> bool:
        return all(q.equivalence_holds for q in self.quadruples)

    @property
    def all_agreeing(self) -> bool:
        return all(q.coordinates_equal for q in self.quadruples)


def verify_m4_characterization(D: DistanceMatrix) -> M4Report:
    """Report, per quadruple, the pairing sums (a, b, c), whether their
    maximum is attained twice, and whether the induced pairing
    coordinates a+min(b,c), b+min(a,c), c+min(a,b) agree.  The two tests
    are equivalent pointwise; the report exposes both so the equivalence
    is checkable."""
    reports = []
    for i, j, k, l in combinations(range(1, D.n + 1), 4):
        a = D.get(i, j) + D.get(k, l)
        b = D.get(i, k) + D.get(j, l)
        c = D.get(i, l) + D.get(j, k)
        coords = (a + min(b, c), b + min(a, c), c + min(a, b))
        reports.append(
            QuadrupleReport(
                (i, j, k, l),
                (a, b, c),
                max_twice((a, b, c)),
                coords[0] == coords[1] == coords[2],
            )
        )
    return M4Report(D.n, tuple(reports))


# ---------------------------------------------------------------------------
# Short operator-style synonyms

PiPoint = PairingPoint


def phi_m(D: DistanceMatrix, m: int, method: str = "auto", dp_threshold: int = 6) -> DissimTensor:
    """Short name for :func:`dissimilarity_map`."""
    return dissimilarity_map(D, m, method=method, dp_threshold=dp_threshold)


def phi_3(D: DistanceMatrix) -> DissimTensor:
    """Short name for :func:`triple_dissimilarity`."""
    return triple_dissimilarity(D)


def phi_m_with_argmin(
    D: DistanceMatrix, m: int, subset: Iterable[int]
) -> tuple[Fraction, tuple[tuple[int, ...], ...]]:
    """Short name for :func:`tour_minimizers`; ``m`` must match the subset."""
    subset = tuple(sorted(subset))
    if len(subset) != m:
        raise ValueError(f"subset has {len(subset)} elements, expected m={m}")
    return tour_minimizers(D, subset)


def invert3(W: DissimTensor, method: str = "formula") -> DistanceMatrix:
    """Short name for :func:`invert_triple_dissimilarity`."""
    return invert_triple_dissimilarity(W, method=method)


def membership3(W: DissimTensor, cross_check: bool = True) -> Membership3Result:
    """Short name for :func:`triple_membership`."""
    return triple_membership(W, cross_check=cross_check)


def pi4(D: DistanceMatrix) -> PairingPoint:
    """Short name for :func:`pairing_map`."""
    return pairing_map(D)


def in_L(P: PairingPoint) -> Verdict:
    """Short name for :func:`pairing_agreement`."""
    return pairing_agreement(P)


def p_project(P: PairingPoint) -> DissimTensor:
    """Short name for :func:`project_pairings`."""
    return project_pairings(P)
