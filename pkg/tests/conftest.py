"""Shared brute-force oracles. Everything here recomputes from the definitions
with plain loops, independent of the package kernels it is used to check."""

from __future__ import annotations

import itertools

import pytest

from f2sets import ElementSet


def oracle_rep_counts(A: ElementSet) -> list[int]:
    """Ordered counts by double loop over the cartesian square."""
    counts = [0] * (1 << A.rank)
    elems = A.elements()
    for a in elems:
        for b in elems:
            counts[a ^ b] += 1
    return counts


def oracle_unique_sums(A: ElementSet) -> set[int]:
    """Unordered pair enumeration, with (a, a) as the representation of 0."""
    reps: dict[int, set[frozenset]] = {}
    elems = A.elements()
    for i, a in enumerate(elems):
        for b in elems[i:]:
            reps.setdefault(a ^ b, set()).add(frozenset((a, b)))
    return {d for d, pairs in reps.items() if len(pairs) == 1}


def oracle_sumset(B: ElementSet, C: ElementSet) -> set[int]:
    return {b ^ c for b in B for c in C}


def oracle_span(elems, r) -> set[int]:
    """Closure under XOR to a fixpoint."""
    members = {0} | set(elems)
    while True:
        new = {a ^ b for a in members for b in members}
        if new <= members:
            return members
        members |= new


def oracle_period(B: ElementSet) -> set[int]:
    """Definitional scan over all shifts."""
    out = set()
    bset = set(B.elements())
    for g in range(1 << B.rank):
        if {b ^ g for b in bset} == bset:
            out.add(g)
    return out


def oracle_is_round(A: ElementSet) -> bool:
    """Remove each element and compare sumsets from scratch."""
    if len(A) <= 1:
        return True
    full = oracle_sumset(A, A)
    for a in A:
        rest = A.without_element(a)
        if oracle_sumset(rest, rest) == full:
            return False
    return True


def oracle_is_minimal_saturating(A: ElementSet) -> bool:
    if 0 in A or len(A) == 0:
        return False
    n = 1 << A.rank
    if set(A.elements()) | oracle_sumset(A, A) != set(range(n)):
        return False
    for a in A:
        rest = A.without_element(a)
        if set(rest.elements()) | oracle_sumset(rest, rest) == set(range(n)):
            return False
    return True


def oracle_matching(n: int, edges) -> int:
    """Exhaustive search over edge subsets; fine for |E| <= 20."""
    edges = list(edges)
    best = 0
    for k in range(len(edges), 0, -1):
        if k <= best:
            break
        for combo in itertools.combinations(edges, k):
            seen = set()
            ok = True
            for i, j in combo:
                if i in seen or j in seen:
                    ok = False
                    break
                seen.add(i)
                seen.add(j)
            if ok:
                best = k
                break
    return best


def all_invertible_maps(r: int) -> list[tuple[int, ...]]:
    """Every invertible map as a tuple of basis-vector images (r <= 4)."""
    n = 1 << r
    out = []
    for cols in itertools.product(range(1, n), repeat=r):
        piv = {}
        ok = True
        for c in cols:
            v = c
            while v:
                lead = v.bit_length() - 1
                if lead not in piv:
                    piv[lead] = v
                    break
                v ^= piv[lead]
            else:
                ok = False
                break
        if ok:
            out.append(cols)
    return out


def apply_map(cols, x: int) -> int:
    out = 0
    for i, c in enumerate(cols):
        if (x >> i) & 1:
            out ^= c
    return out


@pytest.fixture(scope="session")
def gl3():
    return all_invertible_maps(3)


@pytest.fixture(scope="session")
def gl4():
    return all_invertible_maps(4)
