"""Brute-force reference computations, deliberately independent of the package internals."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def free_reduce(word):
    """Reduce a sequence of nonzero ints (+i for generator i, -i for its inverse) with a stack."""
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_return_probability(rank: int, n: int) -> Fraction:
    """mu^{*n}(e) for simple random walk on F_rank by enumerating all (2 rank)^n words."""
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    hits = sum(1 for w in itertools.product(letters, repeat=n) if not free_reduce(w))
    return Fraction(hits, len(letters) ** n)


def z_return_probability(n: int) -> Fraction:
    """Simple walk on Z: C(n, n/2) / 2^n for even n."""
    return Fraction(math.comb(n, n // 2), 2 ** n) if n % 2 == 0 else Fraction(0)


def closure(mul: np.ndarray, gens) -> frozenset:
    """Subgroup generated by ``gens`` in a finite group table, by saturating products."""
    n = mul.shape[0]
    e = next(i for i in range(n) if np.array_equal(mul[i], np.arange(n)))
    elems = {e, *gens}
    while True:
        new = {int(mul[a, b]) for a in elems for b in elems} | elems
        if new == elems:
            return frozenset(elems)
        elems = new


def all_small_subgroups(mul: np.ndarray) -> set:
    """Every subgroup generated by at most two elements (all subgroups for the test corpus)."""
    n = mul.shape[0]
    return {closure(mul, [a, b]) for a in range(n) for b in range(n)}


def in_proper_coset(mul: np.ndarray, support) -> bool:
    """True iff supp lies in some left coset gH of a proper subgroup H (exhaustive)."""
    n = mul.shape[0]
    supp = set(support)
    for H in all_small_subgroups(mul):
        if len(H) == n:
            continue
        for g in range(n):
            if supp <= {int(mul[g, h]) for h in H}:
                return True
    return False


def path_graph_radius(R: int) -> float:
    """Largest |eigenvalue| of the (2R+1)-point path with 1/2 off-diagonal, by dense eigensolve."""
    m = 2 * R + 1
    A = np.zeros((m, m))
    idx = np.arange(m - 1)
    A[idx, idx + 1] = A[idx + 1, idx] = 0.5
    return float(np.abs(np.linalg.eigvalsh(A)).max())


def orbital_count(action: np.ndarray) -> int:
    """Number of G-orbits on X x X for an action table ``action[g, x]``.

    For a permutation representation this equals the dimension of its commutant
    (the orbit indicator matrices form a basis of the intertwiners).
    """
    n = action.shape[1]
    seen = np.zeros((n, n), dtype=bool)
    count = 0
    for x in range(n):
        for y in range(n):
            if not seen[x, y]:
                count += 1
                seen[action[:, x], action[:, y]] = True
    return count
