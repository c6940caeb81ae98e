"""Finite groups given by full multiplication tables.

Elements are dense integer ids ``0..order-1``. Constructors cover the small
families used throughout the package (cyclic, dihedral, symmetric,
quaternion, direct products) plus arbitrary tables.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from functools import cached_property

import numpy as np

from .errors import ConfigError


class FiniteGroup:
    """A finite group with total multiplication and inversion tables.

    ``mul[a, b]`` is the id of ``a*b``. ``generators`` is a canonical generating
    set used by representation constructors and the ``uniform_on_generators``
    measure preset.
    """

    def __init__(self, mul, *, labels: Sequence[str] | None = None,
                 generators: Sequence[int] | None = None, name: str | None = None,
                 check: bool = True):
        mul = np.array(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise ConfigError("multiplication table must be a non-empty square matrix")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise ConfigError("multiplication table entries must be element ids")
        mul.setflags(write=False)
        self.mul = mul
        self.order = n
        self.name = name or f"table[{n}]"
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ConfigError("labels must be distinct and one per element")

        identity = [e for e in range(n)
                    if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
        if not identity:
            raise ConfigError("multiplication table has no two-sided identity")
        self.identity = identity[0]
        rows, cols = np.nonzero(mul == self.identity)
        inv = np.full(n, -1, dtype=np.int64)
        inv[rows] = cols
        if (inv < 0).any() or not np.array_equal(mul[np.arange(n), inv], np.full(n, self.identity)):
            raise ConfigError("some element has no two-sided inverse")
        inv.setflags(write=False)
        self.inv = inv
        if check:
            self.check_associative()
        if generators is None:
            generators = _greedy_generators(self)
        self.generators = tuple(int(g) for g in generators)
        if check and len(generated_subgroup(self, self.generators or [self.identity])) != n:
            raise ConfigError(f"declared generators {self.generators} do not generate {self.name}")
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.mul, other.mul)

    def __hash__(self):
        return hash((self.order, self.mul.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.order)

    def check_associative(self, samples: int = 20_000, seed: int = 0) -> None:
        """Exhaustive for order <= 256, random triples above."""
        m = self.mul
        if self.order <= 256:
            # (ab)c == a(bc) for all a,b,c, one slab of a at a time
            for a in range(self.order):
                if not np.array_equal(m[m[a]], m[a][m]):
                    raise ConfigError("multiplication table is not associative")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, self.order, size=(3, samples))
            if not np.array_equal(m[m[a, b], c], m[a, m[b, c]]):
                raise ConfigError("multiplication table is not associative")

    # element-level operations, shared protocol with the word groups
    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def contains(self, g) -> bool:
        return isinstance(g, (int, np.integer)) and 0 <= g < self.order

    def sort_key(self, g: int):
        return g

    def element(self, ref) -> int:
        """Resolve an id or a label to an element id."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if not self.contains(int(ref)):
                raise ConfigError(f"element id {ref} outside {self.name}")
            return int(ref)
        ref = str(ref).strip()
        if ref in self._label_index:
            return self._label_index[ref]
        if ref.lstrip("-").isdigit() and self.contains(int(ref)):
            return int(ref)
        raise ConfigError(f"unknown element {ref!r} in {self.name}")

    def format(self, g: int) -> str:
        return self.labels[g]

    def symmetric_generators(self) -> tuple[int, ...]:
        out = []
        for g in self.generators:
            for h in (g, self.inverse(g)):
                if h not in out:
                    out.append(h)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        for g in range(self.order):
            x, k = g, 1
            while x != self.identity:
                x = int(self.mul[x, g])
                k += 1
            orders[g] = k
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))


def _greedy_generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {G.identity}
    for g in range(G.order):
        if g not in span:
            gens.append(g)
            span = generated_subgroup(G, gens)
            if len(span) == G.order:
                break
    return gens


def generated_subgroup(G: FiniteGroup, S: Iterable[int]) -> frozenset[int]:
    """Smallest subset containing ``S`` and the identity, closed under mul and inv."""
    S = [G.element(s) for s in S]
    if not S:
        raise ValueError("empty generating set")
    closed = {G.identity}
    frontier = [G.identity]
    gens = set(S) | {int(G.inv[s]) for s in S}
    # finite group: closure under right multiplication by gens and their inverses
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(G.mul[x, s])
                if y not in closed:
                    closed.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(closed)


def _support_in(G: FiniteGroup, mu) -> list[int]:
    if getattr(mu, "group", G) != G:
        raise ValueError("measure is not supported on this group")
    supp = list(mu.support)
    for g in supp:
        if not G.contains(g):
            raise ValueError(f"support element {g!r} not in {G.name}")
    return supp


def is_adapted(G: FiniteGroup, mu) -> bool:
    """True iff the support of ``mu`` generates ``G`` (dense means equal here)."""
    supp = _support_in(G, mu)
    return len(generated_subgroup(G, supp)) == G.order


def coset_witness(G: FiniteGroup, mu) -> tuple[int, frozenset[int]] | None:
    """Return ``(g, H)`` with ``H`` a proper subgroup and ``supp(mu) ⊆ gH``, or None.

    A coset containing the support contains a fixed support point ``s0``, so it
    is ``s0·H`` with ``H ⊇ s0^{-1}·supp``. Every such ``H`` contains the closure
    of that difference set, which is therefore the only candidate to test.
    """
    supp = _support_in(G, mu)
    s0 = supp[0]
    diffs = {G.op(G.inverse(s0), s) for s in supp}
    H = generated_subgroup(G, diffs)
    if len(H) == G.order:
        return None
    coset = {G.op(s0, h) for h in H}
    if not set(supp) <= coset:
        raise AssertionError("difference-set closure failed to cover the support")
    return s0, H


def is_strongly_adapted(G: FiniteGroup, mu) -> bool:
    """True iff no proper subgroup ``H`` and element ``g`` have ``supp(mu) ⊆ gH``."""
    return coset_witness(G, mu) is None


def left_cosets(G: FiniteGroup, H: Iterable[int]) -> list[frozenset[int]]:
    H = frozenset(H)
    cosets: list[frozenset[int]] = []
    covered: set[int] = set()
    for g in G.elements:
        if g not in covered:
            c = frozenset(G.op(g, h) for h in H)
            cosets.append(c)
            covered |= c
    return cosets


# ---------------------------------------------------------------- constructors

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ConfigError("cyclic group order must be positive")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"Z/{n}",
                       generators=[1 % n] if n > 1 else [0], check=False)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n; id ``k + n*f`` is ``r^k s^f``."""
    if n < 1:
        raise ConfigError("dihedral parameter must be positive")
    order = 2 * n
    mul = np.empty((order, order), dtype=np.int64)
    for k1, f1, k2, f2 in itertools.product(range(n), range(2), range(n), range(2)):
        k = (k1 + (-k2 if f1 else k2)) % n
        mul[k1 + n * f1, k2 + n * f2] = k + n * ((f1 + f2) % 2)
    labels = [(f"r{k}" if k else "") + ("s" if f else "") or "e"
              for f in range(2) for k in range(n)]
    gens = [1 % n, n] if n > 1 else [n]
    return FiniteGroup(mul, labels=labels, generators=gens, name=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` in lexicographic order; ``(p*q)(i) = p[q[i]]``."""
    if not 1 <= n <= 5:
        raise ConfigError("symmetric groups are provided for 1 <= n <= 5")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    mul = np.array([[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms])
    gens = []
    if n >= 2:
        gens.append(index[(1, 0) + tuple(range(2, n))])
    if n >= 3:
        gens.append(index[tuple(range(1, n)) + (0,)])
    labels = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(mul, labels=labels, generators=gens or [0], name=f"S{n}")


def quaternion() -> FiniteGroup:
    """The quaternion group Q8 = {±1, ±i, ±j, ±k}."""
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    elems = [tuple(s * x for x in u) for s in (1, -1) for u in units]

    def qmul(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    index = {e: i for i, e in enumerate(elems)}
    mul = np.array([[index[qmul(p, q)] for q in elems] for p in elems])
    labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return FiniteGroup(mul, labels=labels, generators=[1, 2], name="Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Id ``a*|H| + b`` stands for the pair ``(a, b)``."""
    m = H.order
    mul = (G.mul[:, None, :, None] * m + H.mul[None, :, None, :]).reshape(G.order * m, G.order * m)
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    gens = [g * m + H.identity for g in G.generators] + [G.identity * m + h for h in H.generators]
    return FiniteGroup(mul, labels=labels, generators=gens, name=f"{G.name}x{H.name}")


def from_table(table, labels=None, generators=None, name=None) -> FiniteGroup:
    return FiniteGroup(table, labels=labels, generators=generators, name=name, check=True)


def named_group(spec: str) -> FiniteGroup:
    """Parse compact names: ``Z6``, ``cyclic:6``, ``D4``, ``dihedral:4``, ``S3``, ``Q8``,
    and products joined by ``x`` such as ``Z2xZ3``."""
    s = spec.strip()
    if "x" in s and not s.startswith(("cyclic", "dihedral", "symmetric")):
        parts = [named_group(p) for p in s.split("x")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        return out
    kind, _, arg = s.partition(":")
    kind = kind.lower()
    if not arg:
        head = kind.rstrip("0123456789")
        arg = kind[len(head):]
        kind = head
    try:
        if kind in ("z", "c", "cyclic"):
            return cyclic(int(arg))
        if kind in ("d", "dihedral"):
            return dihedral(int(arg))
        if kind in ("s", "symmetric"):
            return symmetric(int(arg))
        if kind in ("q", "quaternion") and arg in ("8", ""):
            return quaternion()
    except ValueError:
        pass
    raise ConfigError(f"unknown finite group {spec!r}")
