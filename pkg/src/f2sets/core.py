"""Exact arithmetic and set algebra for the elementary abelian 2-group of rank r.

Group elements are integers in [0, 2^r) with XOR as the group operation, so
every element is its own inverse and 0 is the identity. Subsets are immutable
bitsets backed by arbitrary-precision integers: bit i of the backing integer
records membership of element i. All operations are pure functions; values can
be shared freely between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

MAX_RANK = 24


class RankMismatchError(ValueError):
    """Raised when two values from groups of different rank are combined."""


def validate_rank(r: int, *, minimum: int = 1) -> int:
    if not isinstance(r, int) or isinstance(r, bool):
        raise TypeError(f"rank must be an integer, got {r!r}")
    if r < minimum or r > MAX_RANK:
        raise ValueError(f"rank must be in [{minimum}, {MAX_RANK}], got {r}")
    return r


def group_order(r: int) -> int:
    return 1 << r


def add(x: int, y: int, rank: int | None = None) -> int:
    """Group addition: coordinatewise XOR. add(x, x) == 0 for every x."""
    if rank is not None:
        n = group_order(rank)
        if not (0 <= x < n and 0 <= y < n):
            raise RankMismatchError(f"elements {x}, {y} out of range for rank {rank}")
    return x ^ y


@lru_cache(maxsize=None)
def _full_mask(r: int) -> int:
    return (1 << (1 << r)) - 1


@lru_cache(maxsize=None)
def _swap_mask(r: int, i: int) -> int:
    # Bits whose index has coordinate i clear: s ones, s zeros, repeated.
    s = 1 << i
    block = (1 << (2 * s)) - 1
    repeated = _full_mask(r) // block
    return repeated * ((1 << s) - 1)


def translate_bits(bits: int, g: int, r: int) -> int:
    """Permute a 2^r-bit set integer by XOR-ing every index with g."""
    for i in range(r):
        if (g >> i) & 1:
            s = 1 << i
            m = _swap_mask(r, i)
            bits = ((bits & m) << s) | ((bits >> s) & m)
    return bits


def bits_to_indices(bits: int, r: int) -> np.ndarray:
    """Set-bit positions of a 2^r-bit integer as an int64 array."""
    n = 1 << r
    nbytes = max(1, n // 8)
    buf = bits.to_bytes(nbytes, "little")
    flat = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little", count=n)
    return np.flatnonzero(flat)


def indices_to_bits(indices: np.ndarray, r: int) -> int:
    n = 1 << r
    flat = np.zeros(n, dtype=np.uint8)
    flat[indices] = 1
    return int.from_bytes(np.packbits(flat, bitorder="little").tobytes(), "little")


class ElementSet:
    """An immutable subset of the rank-r group, stored as a 2^r-bit integer.

    Membership, cardinality and equality are O(1)-ish bit operations; the
    boolean algebra and XOR-translation are exact at any rank up to MAX_RANK.
    Instances are hashable and safe to share.
    """

    __slots__ = ("rank", "bits")

    def __init__(self, rank: int, bits: int):
        validate_rank(rank, minimum=0)
        if bits < 0 or bits > _full_mask(rank):
            raise ValueError(f"bits out of range for rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("ElementSet is immutable")

    @classmethod
    def empty(cls, rank: int) -> "ElementSet":
        return cls(rank, 0)

    @classmethod
    def full(cls, rank: int) -> "ElementSet":
        return cls(rank, _full_mask(rank))

    @classmethod
    def from_elements(cls, rank: int, elements: Iterable[int]) -> "ElementSet":
        validate_rank(rank, minimum=0)
        n = group_order(rank)
        bits = 0
        for e in elements:
            if not (0 <= e < n):
                raise ValueError(f"element {e} out of range for rank {rank}")
            bits |= 1 << e
        return cls(rank, bits)

    @classmethod
    def singleton(cls, rank: int, e: int) -> "ElementSet":
        return cls.from_elements(rank, (e,))

    # -- JSON set literal: {"r": int, "elements": [...]} or {"r": int, "bits_hex": "..."}

    @classmethod
    def from_json(cls, obj: dict) -> "ElementSet":
        if not isinstance(obj, dict) or "r" not in obj:
            raise ValueError("set literal must be an object with an 'r' field")
        rank = obj["r"]
        validate_rank(rank)
        if "elements" in obj:
            return cls.from_elements(rank, obj["elements"])
        if "bits_hex" in obj:
            hexstr = obj["bits_hex"]
            expected = max(1, (1 << rank) // 4)
            if len(hexstr) != expected:
                raise ValueError(
                    f"bits_hex must have {expected} hex chars for rank {rank}, got {len(hexstr)}"
                )
            # Little-endian nibbles: first char covers elements 0..3.
            return cls(rank, int(hexstr[::-1], 16))
        raise ValueError("set literal needs 'elements' or 'bits_hex'")

    def to_json(self) -> dict:
        return {"r": self.rank, "elements": self.elements()}

    def to_hex_json(self) -> dict:
        width = max(1, (1 << self.rank) // 4)
        hexstr = format(self.bits, f"0{width}x")[::-1]
        return {"r": self.rank, "bits_hex": hexstr}

    # -- basic protocol

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, e: int) -> bool:
        return 0 <= e < group_order(self.rank) and (self.bits >> e) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def elements(self) -> list[int]:
        return list(self)

    def indices(self) -> np.ndarray:
        return bits_to_indices(self.bits, self.rank)

    def min_element(self) -> int:
        if not self.bits:
            raise ValueError("empty set has no minimum")
        return (self.bits & -self.bits).bit_length() - 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ElementSet)
            and self.rank == other.rank
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.bits))

    def __repr__(self) -> str:
        inside = ",".join(str(e) for e in self)
        return f"ElementSet(r={self.rank}, {{{inside}}})"

    def _check_rank(self, other: "ElementSet") -> None:
        if self.rank != other.rank:
            raise RankMismatchError(f"rank {self.rank} vs {other.rank}")

    # -- set algebra

    def union(self, other: "ElementSet") -> "ElementSet":
        self._check_rank(other)
        return ElementSet(self.rank, self.bits | other.bits)

    def intersect(self, other: "ElementSet") -> "ElementSet":
        self._check_rank(other)
        return ElementSet(self.rank, self.bits & other.bits)

    def difference(self, other: "ElementSet") -> "ElementSet":
        self._check_rank(other)
        return ElementSet(self.rank, self.bits & ~other.bits & _full_mask(self.rank))

    def complement(self) -> "ElementSet":
        return ElementSet(self.rank, self.bits ^ _full_mask(self.rank))

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def isdisjoint(self, other: "ElementSet") -> bool:
        self._check_rank(other)
        return self.bits & other.bits == 0

    def issubset(self, other: "ElementSet") -> bool:
        self._check_rank(other)
        return self.bits & ~other.bits == 0

    def with_element(self, e: int) -> "ElementSet":
        if not (0 <= e < group_order(self.rank)):
            raise ValueError(f"element {e} out of range for rank {self.rank}")
        return ElementSet(self.rank, self.bits | (1 << e))

    def without_element(self, e: int) -> "ElementSet":
        return ElementSet(self.rank, self.bits & ~(1 << e))

    def with_zero(self) -> "ElementSet":
        return ElementSet(self.rank, self.bits | 1)

    def nonzero(self) -> "ElementSet":
        return ElementSet(self.rank, self.bits & ~1)

    def translate(self, g: int) -> "ElementSet":
        """The set {b + g : b in self}; an involution for fixed g."""
        if not (0 <= g < group_order(self.rank)):
            raise RankMismatchError(f"element {g} out of range for rank {self.rank}")
        return ElementSet(self.rank, translate_bits(self.bits, g, self.rank))

    def is_full(self) -> bool:
        return self.bits == _full_mask(self.rank)


def _echelon_insert(pivots: dict[int, int], v: int) -> int:
    """Reduce v against the pivot rows; return the surviving residue (0 if dependent)."""
    while v:
        lead = v.bit_length() - 1
        if lead not in pivots:
            return v
        v ^= pivots[lead]
    return 0


def _reduced_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row-echelon basis over F2: unique per subgroup, pivots descending."""
    pivots: dict[int, int] = {}
    for v in vectors:
        res = _echelon_insert(pivots, v)
        if res:
            pivots[res.bit_length() - 1] = res
    # Back-substitute so each pivot bit occurs in exactly one basis vector.
    for lead in sorted(pivots, reverse=True):
        for other in pivots:
            if other != lead and (pivots[other] >> lead) & 1:
                pivots[other] ^= pivots[lead]
    return tuple(pivots[lead] for lead in sorted(pivots, reverse=True))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its reduced echelon basis plus the membership bitset.

    The basis is unique for the subgroup, so dataclass equality doubles as
    subgroup equality.
    """

    rank: int
    basis: tuple[int, ...]
    members: ElementSet

    @classmethod
    def generated_by(cls, rank: int, generators: Iterable[int]) -> "Subgroup":
        validate_rank(rank, minimum=0)
        n = group_order(rank)
        gens = list(generators)
        for g in gens:
            if not (0 <= g < n):
                raise ValueError(f"generator {g} out of range for rank {rank}")
        basis = _reduced_basis(gens)
        bits = 1  # {0}
        for v in basis:
            bits |= translate_bits(bits, v, rank)
        return cls(rank, basis, ElementSet(rank, bits))

    @classmethod
    def trivial(cls, rank: int) -> "Subgroup":
        return cls.generated_by(rank, ())

    @classmethod
    def whole_group(cls, rank: int) -> "Subgroup":
        return cls.generated_by(rank, (1 << i for i in range(rank)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << self.dim

    @property
    def index(self) -> int:
        return 1 << (self.rank - self.dim)

    def __contains__(self, e: int) -> bool:
        return e in self.members

    def coset(self, g: int) -> ElementSet:
        return self.members.translate(g)


def span(source: ElementSet | Iterable[int], rank: int | None = None) -> Subgroup:
    """Smallest subgroup containing the given elements; span of nothing is {0}."""
    if isinstance(source, ElementSet):
        return Subgroup.generated_by(source.rank, source)
    if rank is None:
        raise ValueError("rank is required when spanning a bare iterable")
    return Subgroup.generated_by(rank, source)


def is_subgroup(B: ElementSet) -> bool:
    return 0 in B and span(B).members == B


def period(B: ElementSet) -> Subgroup:
    """The stabilizer {g : B + g = B}. Equals the whole group iff B is empty or full.

    Candidates are restricted to b0 + B for a fixed b0 in B; each survivor is
    confirmed with a full bitwise translation check.
    """
    r = B.rank
    if len(B) == 0 or B.is_full():
        return Subgroup.whole_group(r)
    b0 = B.min_element()
    stabil = []
    for b in B:
        g = b0 ^ b
        if translate_bits(B.bits, g, r) == B.bits:
            stabil.append(g)
    sub = Subgroup.generated_by(r, stabil)
    # The valid shifts already form a subgroup; spanning must not add anything.
    assert sub.order == len(stabil)
    return sub


@dataclass(frozen=True)
class QuotientView:
    """Coset labelling for a subgroup H: project onto the rank (r - dim H) quotient.

    Every element reduces to a unique coset representative whose pivot
    coordinates vanish; the representative's free coordinates, packed in
    ascending order, form the quotient label.
    """

    subgroup: Subgroup

    @property
    def rank(self) -> int:
        return self.subgroup.rank

    @property
    def image_rank(self) -> int:
        return self.rank - self.subgroup.dim

    @cached_property
    def _free_bits(self) -> tuple[int, ...]:
        pivot = {v.bit_length() - 1 for v in self.subgroup.basis}
        return tuple(i for i in range(self.rank) if i not in pivot)

    def reduce(self, x: int) -> int:
        """Canonical representative of x + H (pivot coordinates cleared)."""
        for v in self.subgroup.basis:
            if (x >> (v.bit_length() - 1)) & 1:
                x ^= v
        return x

    def project(self, x: int) -> int:
        rep = self.reduce(x)
        label = 0
        for j, i in enumerate(self._free_bits):
            label |= ((rep >> i) & 1) << j
        return label

    def lift(self, label: int) -> int:
        rep = 0
        for j, i in enumerate(self._free_bits):
            rep |= ((label >> j) & 1) << i
        return rep

    @cached_property
    def transversal(self) -> tuple[int, ...]:
        return tuple(self.lift(label) for label in range(1 << self.image_rank))

    def project_set(self, B: ElementSet) -> ElementSet:
        if B.rank != self.rank:
            raise RankMismatchError(f"rank {B.rank} vs {self.rank}")
        out = 0
        for x in B:
            out |= 1 << self.project(x)
        return ElementSet(self.image_rank, out)


def quotient_project(B: ElementSet, H: Subgroup) -> ElementSet:
    """Image of B under the canonical map onto the quotient by H."""
    return QuotientView(H).project_set(B)
