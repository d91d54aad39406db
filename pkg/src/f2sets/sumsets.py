"""Sumsets, representation counts, unique sums, and the set predicates built on them.

Two exact kernels back everything: a sparse pairwise-XOR kernel for small
operands and a dense XOR-convolution kernel (Walsh-Hadamard transform) that
yields the full ordered representation table in O(r * 2^r) arithmetic. The
dense kernel is exact in int64 up to rank 20 (intermediate magnitudes are
bounded by 2^(3r)); above that the code falls back to sparse accumulation.

Counting conventions: RepCountTable stores ordered counts N(d) over A x A.
The unordered count of d != 0 is N(d)/2, and of d = 0 is |A| (each pair
(a, a) counted once). Operations that quantify representations state which
convention they use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import (
    ElementSet,
    RankMismatchError,
    indices_to_bits,
    period,
    translate_bits,
)

# Kernel cutovers, tunable. Sparse work is |B| * |C|; dense work is ~3 * r * 2^r.
_PY_PRODUCT_LIMIT = 1500
_SPARSE_PRODUCT_LIMIT = 1 << 22
_DENSE_MAX_RANK = 20


@dataclass(frozen=True)
class PredicateReport:
    """Outcome of a predicate check. A false verdict always carries a witness."""

    name: str
    verdict: bool
    witness: Any = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        out: dict[str, Any] = {"predicate": self.name, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class RepCountTable:
    """Ordered representation counts N(d) = #{(a1, a2) in A x A : a1 + a2 = d}."""

    rank: int
    size: int  # |A|
    counts: np.ndarray  # int64, length 2^rank, read-only

    def __post_init__(self):
        self.counts.setflags(write=False)

    def ordered(self, d: int) -> int:
        return int(self.counts[d])

    def unordered(self, d: int) -> int:
        if d == 0:
            return self.size
        return int(self.counts[d]) // 2

    def support(self) -> ElementSet:
        """The sumset 2A: all d with at least one representation."""
        return ElementSet(self.rank, indices_to_bits(np.flatnonzero(self.counts), self.rank))

    def at_least(self, k: int) -> ElementSet:
        if k < 1:
            raise ValueError("multiplicity threshold must be >= 1")
        return ElementSet(self.rank, indices_to_bits(np.flatnonzero(self.counts >= k), self.rank))

    def total(self) -> int:
        return int(self.counts.sum())


def _walsh_int64(arr: np.ndarray) -> np.ndarray:
    out = arr.astype(np.int64, copy=True)
    h = 1
    n = len(out)
    while h < n:
        view = out.reshape(-1, 2, h)
        top = view[:, 0, :] + view[:, 1, :]
        bot = view[:, 0, :] - view[:, 1, :]
        view[:, 0, :] = top
        view[:, 1, :] = bot
        h *= 2
    return out


def _indicator(A: ElementSet) -> np.ndarray:
    n = 1 << A.rank
    buf = A.bits.to_bytes(max(1, n // 8), "little")
    return np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little", count=n).astype(np.int64)


def _cross_counts_dense(B: ElementSet, C: ElementSet) -> np.ndarray:
    r = B.rank
    if r > _DENSE_MAX_RANK:
        raise ValueError(f"dense kernel is exact only up to rank {_DENSE_MAX_RANK}")
    fb = _walsh_int64(_indicator(B))
    if C.bits == B.bits:
        fb *= fb
    else:
        fb *= _walsh_int64(_indicator(C))
    out = _walsh_int64(fb)
    out >>= r  # exact: the inverse transform is divisible by 2^r
    return out


def _cross_counts_sparse(B: ElementSet, C: ElementSet) -> np.ndarray:
    n = 1 << B.rank
    bi = B.indices()
    ci = C.indices()
    if len(bi) == 0 or len(ci) == 0:
        return np.zeros(n, dtype=np.int64)
    xo = np.bitwise_xor.outer(bi, ci).ravel()
    return np.bincount(xo, minlength=n).astype(np.int64)


def _cross_counts(B: ElementSet, C: ElementSet) -> np.ndarray:
    product = len(B) * len(C)
    if product <= _SPARSE_PRODUCT_LIMIT or B.rank > _DENSE_MAX_RANK:
        return _cross_counts_sparse(B, C)
    return _cross_counts_dense(B, C)


def _counts_list_small(elems: list[int], n: int) -> list[int]:
    counts = [0] * n
    counts[0] = len(elems)
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            counts[a ^ b] += 2
    return counts


def rep_counts(A: ElementSet) -> RepCountTable:
    """Full ordered representation table for A + A."""
    size = len(A)
    n = 1 << A.rank
    if n <= 256 and size * size <= 4096:
        counts = np.array(_counts_list_small(A.elements(), n), dtype=np.int64)
    else:
        counts = _cross_counts(A, A)
    return RepCountTable(A.rank, size, counts)


def _pair_sum_bits(elems: list[int]) -> int:
    bits = 1 if elems else 0
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            bits |= 1 << (a ^ b)
    return bits


def sumset(B: ElementSet, C: ElementSet) -> ElementSet:
    """Exact support of {b + c : b in B, c in C}."""
    if B.rank != C.rank:
        raise RankMismatchError(f"rank {B.rank} vs {C.rank}")
    r = B.rank
    nb, nc = len(B), len(C)
    if nb == 0 or nc == 0:
        return ElementSet.empty(r)
    same = B.bits == C.bits
    product = nb * nc
    if same and product <= _PY_PRODUCT_LIMIT:
        return ElementSet(r, _pair_sum_bits(B.elements()))
    if product <= _PY_PRODUCT_LIMIT:
        bits = 0
        for b in B:
            for c in C:
                bits |= 1 << (b ^ c)
        return ElementSet(r, bits)
    if product <= _SPARSE_PRODUCT_LIMIT:
        xo = np.bitwise_xor.outer(B.indices(), C.indices()).ravel()
        return ElementSet(r, indices_to_bits(np.unique(xo), r))
    if r <= _DENSE_MAX_RANK:
        counts = _cross_counts_dense(B, C)
        return ElementSet(r, indices_to_bits(np.flatnonzero(counts), r))
    # Arbitrary-rank fallback: translate-accumulate over the smaller operand.
    small, big = (B, C) if nb <= nc else (C, B)
    acc = 0
    for g in small:
        acc |= translate_bits(big.bits, g, r)
    return ElementSet(r, acc)


def two_a(A: ElementSet) -> ElementSet:
    return sumset(A, A)


def mult_sumset(B: ElementSet, C: ElementSet, k: int) -> ElementSet:
    """Elements with at least k ordered representations as b + c."""
    if k < 1:
        raise ValueError("multiplicity k must be >= 1")
    if B.rank != C.rank:
        raise RankMismatchError(f"rank {B.rank} vs {C.rank}")
    if k == 1:
        return sumset(B, C)
    counts = _cross_counts(B, C)
    return ElementSet(B.rank, indices_to_bits(np.flatnonzero(counts >= k), B.rank))


def _ordered_counts(A: ElementSet):
    """Length-2^r ordered count table as a plain list (small) or ndarray."""
    n = 1 << A.rank
    size = len(A)
    if n <= 256 and size * size <= 4096:
        return _counts_list_small(A.elements(), n)
    return _cross_counts(A, A)


def _doubles_bits(counts, rank: int) -> int:
    """Bitset of d != 0 whose ordered count is exactly 2 (one unordered pair)."""
    if isinstance(counts, list):
        bits = 0
        for d in range(1, len(counts)):
            if counts[d] == 2:
                bits |= 1 << d
        return bits
    hits = np.flatnonzero(counts == 2)
    bits = indices_to_bits(hits, rank)
    return bits & ~1


def unique_sums(A: ElementSet) -> ElementSet:
    """The set of elements with exactly one unordered representation from A + A."""
    counts = _ordered_counts(A)
    bits = _doubles_bits(counts, A.rank)
    if len(A) == 1:
        bits |= 1  # 0 = a + a is the unique representation
    return ElementSet(A.rank, bits)


# -- predicates


def is_sum_free(A: ElementSet) -> PredicateReport:
    """A is sum-free iff A and 2A are disjoint (no internal lines)."""
    hit = A.intersect(two_a(A))
    if len(hit) == 0:
        return PredicateReport("sum-free", True)
    d = hit.min_element()
    for a in A:
        if (a ^ d) in A:
            return PredicateReport(
                "sum-free", False, witness={"triple": [a, a ^ d, d]},
                detail=f"{a} + {a ^ d} = {d}, all in the set",
            )
    raise AssertionError("unreachable: element of 2A without a pair")


def is_maximal_sum_free(A: ElementSet) -> PredicateReport:
    """Maximal sum-free iff sum-free and A, 2A partition the group."""
    sf = is_sum_free(A)
    if not sf:
        return PredicateReport("maximal-sum-free", False, witness=sf.witness, detail=sf.detail)
    uncovered = A.union(two_a(A)).complement()
    if len(uncovered):
        g = uncovered.min_element()
        return PredicateReport(
            "maximal-sum-free", False, witness={"adjoinable": g},
            detail=f"{g} can be adjoined keeping the set sum-free",
        )
    return PredicateReport("maximal-sum-free", True)


def is_saturating(A: ElementSet) -> PredicateReport:
    """Saturating iff A together with 2A covers the whole group. Requires 0 not in A."""
    if 0 in A:
        raise ValueError("saturating sets live in the nonzero part of the group")
    if len(A) == 0:
        return PredicateReport("saturating", False, witness={"uncovered": 0})
    uncovered = A.union(two_a(A)).complement()
    if len(uncovered):
        return PredicateReport("saturating", False, witness={"uncovered": uncovered.min_element()})
    return PredicateReport("saturating", True)


def _nonremovable_bits(A: ElementSet, counts) -> tuple[int, int]:
    """Helper for minimality: returns (twoA_bits, bits of doubles outside A).

    Removing a from a saturating A keeps it saturating iff a is still covered
    (a in 2A; pairs for a never involve a itself since 0 is excluded) and no
    d outside A loses its last representation. The only candidates for the
    latter are d != 0 with exactly one unordered pair, that pair involving a.
    """
    if isinstance(counts, list):
        two_bits = 0
        for d, c in enumerate(counts):
            if c:
                two_bits |= 1 << d
    else:
        two_bits = indices_to_bits(np.flatnonzero(counts), A.rank)
    d2_outside = _doubles_bits(counts, A.rank) & ~A.bits
    return two_bits, d2_outside


def is_minimal_saturating(A: ElementSet) -> PredicateReport:
    """Minimal saturating: saturating, and removing any single element breaks it."""
    sat = is_saturating(A)
    if not sat:
        return PredicateReport(
            "minimal-saturating", False, witness=sat.witness, detail="not saturating"
        )
    r = A.rank
    counts = _ordered_counts(A)
    two_bits, d2_outside = _nonremovable_bits(A, counts)
    for a in A:
        covered_after = (two_bits >> a) & 1
        breaks_outside = translate_bits(A.bits, a, r) & d2_outside
        if covered_after and not breaks_outside:
            return PredicateReport("minimal-saturating", False, witness={"removable": a})
    return PredicateReport("minimal-saturating", True)


def is_round(A: ElementSet) -> PredicateReport:
    """Round: removing any single element strictly shrinks the sumset 2A.

    Computed by removal bookkeeping on the ordered count table: dropping a
    removes the pairs (a, y) and (y, a), so 2(A without a) loses d exactly
    when d != 0, N(d) = 2 and a + d lies in A (the empty and singleton sets
    are round by convention).
    """
    if len(A) <= 1:
        return PredicateReport("round", True)
    r = A.rank
    counts = _ordered_counts(A)
    d2 = _doubles_bits(counts, r)
    for a in A:
        if not (translate_bits(A.bits, a, r) & d2):
            return PredicateReport("round", False, witness={"redundant": a})
    return PredicateReport("round", True)


def kneser_check(B: ElementSet, C: ElementSet) -> PredicateReport:
    """When |B+C| <= |B| + |C| - 1, the period H of B+C must satisfy
    |B+C| = |B+H| + |C+H| - |H|. A false verdict would indicate a bug here,
    not a counterexample to the theorem."""
    if len(B) == 0 or len(C) == 0:
        raise ValueError("kneser_check needs non-empty sets")
    S = sumset(B, C)
    if len(S) > len(B) + len(C) - 1:
        return PredicateReport("kneser", True, detail="hypothesis |B+C| <= |B|+|C|-1 not triggered")
    H = period(S)
    bh = len(sumset(B, H.members))
    ch = len(sumset(C, H.members))
    lhs = len(S)
    rhs = bh + ch - H.order
    if lhs == rhs:
        return PredicateReport("kneser", True)
    return PredicateReport(
        "kneser", False,
        witness={"B": B.to_json(), "C": C.to_json(), "lhs": lhs, "rhs": rhs,
                 "period_basis": list(H.basis)},
    )


def alldisjoint_check(B: ElementSet, C: ElementSet) -> PredicateReport:
    """Disjoint B, C with |B| + |C| > 2^(r-1): their union must meet B + C."""
    if B.rank != C.rank:
        raise RankMismatchError(f"rank {B.rank} vs {C.rank}")
    r = B.rank
    if len(B) == 0 or len(C) == 0:
        raise ValueError("alldisjoint_check needs non-empty sets")
    if not B.isdisjoint(C):
        raise ValueError("alldisjoint_check needs disjoint sets")
    if len(B) + len(C) <= 1 << (r - 1):
        raise ValueError("alldisjoint_check needs |B| + |C| > 2^(r-1)")
    meet = B.union(C).intersect(sumset(B, C))
    if len(meet):
        return PredicateReport("alldisjoint", True, detail=f"common element {meet.min_element()}")
    return PredicateReport(
        "alldisjoint", False, witness={"B": B.to_json(), "C": C.to_json()},
    )


def s2_bound_check(B: ElementSet, C: ElementSet) -> PredicateReport:
    """|B ⊞2 C| >= min(2|B| + 2|C| - 4 - 2^r, |B| - 1) for |B|, |C| >= 2."""
    if B.rank != C.rank:
        raise RankMismatchError(f"rank {B.rank} vs {C.rank}")
    if len(B) < 2 or len(C) < 2:
        raise ValueError("s2_bound_check needs |B| >= 2 and |C| >= 2")
    m2 = len(mult_sumset(B, C, 2))
    bound = min(2 * len(B) + 2 * len(C) - 4 - (1 << B.rank), len(B) - 1)
    if m2 >= bound:
        return PredicateReport("s2-bound", True, detail=f"|B⊞2C| = {m2} >= {bound}")
    return PredicateReport(
        "s2-bound", False,
        witness={"B": B.to_json(), "C": C.to_json(), "m2": m2, "bound": bound},
    )


def sfnotround_check(S: ElementSet, kappa: int) -> PredicateReport:
    """Sum-free S with |S| > 2^(r-2) + kappa: every element of 2S has at least
    kappa unordered representations."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    r = S.rank
    if r < 2:
        raise ValueError("rank must be >= 2")
    if not is_sum_free(S):
        raise ValueError("sfnotround_check needs a sum-free set")
    if len(S) <= (1 << (r - 2)) + kappa:
        raise ValueError("sfnotround_check needs |S| > 2^(r-2) + kappa")
    table = rep_counts(S)
    for c in table.support():
        got = table.unordered(c)
        if got < kappa:
            return PredicateReport(
                "sfnotround", False, witness={"element": c, "count": got, "kappa": kappa},
            )
    return PredicateReport("sfnotround", True)


def php_covered(B: ElementSet, C: ElementSet, kappa: int) -> PredicateReport:
    """Pigeonhole bound: |B| + |C| >= 2^r + kappa forces every element to have
    at least kappa ordered representations as b + c."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    r = B.rank
    if len(B) + len(C) < (1 << r) + kappa:
        raise ValueError("php_covered needs |B| + |C| >= 2^r + kappa")
    if mult_sumset(B, C, kappa).is_full():
        return PredicateReport("php-cover", True)
    missing = mult_sumset(B, C, kappa).complement().min_element()
    return PredicateReport("php-cover", False, witness={"element": missing})
