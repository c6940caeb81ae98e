"""Finitely generated groups with canonical normal forms.

Elements are hashable normal forms, so equality of group elements is plain
``==``:

* free group of rank k: reduced words, tuples of nonzero ints where ``+i`` is
  the i-th generator (1-based) and ``-i`` its inverse;
* free abelian group Z^d: exponent vectors;
* direct products: tuples of factor elements.

Words are written with letters ``a, b, c, ...`` for the generators and the
uppercase letter for the inverse, e.g. ``aB`` is ``a b^{-1}``; ``e`` is the
identity. ``a^3`` and ``b^-2`` are accepted on input.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from functools import cached_property

from .errors import ConfigError

_TOKEN = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")


def _convolve_counts(a: list[int], b: list[int], R: int) -> list[int]:
    out = [0] * (R + 1)
    for i, x in enumerate(a[: R + 1]):
        for j, y in enumerate(b[: R + 1 - i]):
            out[i + j] += x * y
    return out


class WordGroup:
    """Shared behaviour of the word-group families."""

    ngens: int

    def parse_letters(self, text: str) -> list[tuple[int, int]]:
        """Parse a letter word into ``(generator index, exponent)`` pairs."""
        text = text.replace(" ", "").replace("*", "")
        if text in ("", "e", "1"):
            return []
        pos, out = 0, []
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ConfigError(f"cannot parse word {text!r}")
            ch, exp = m.group(1), int(m.group(2) or 1)
            idx = string.ascii_lowercase.index(ch.lower())
            if idx >= self.ngens:
                raise ConfigError(f"letter {ch!r} beyond the {self.ngens} generators of {self}")
            out.append((idx, -exp if ch.isupper() else exp))
            pos = m.end()
        return out

    def from_letters(self, letters: list[tuple[int, int]]):
        g = self.identity
        gens = self.generators
        for idx, exp in letters:
            step = gens[idx] if exp > 0 else self.inverse(gens[idx])
            for _ in range(abs(exp)):
                g = self.op(g, step)
        return g

    def element(self, ref):
        if isinstance(ref, str):
            return self.from_letters(self.parse_letters(ref))
        if self.contains(ref):
            return ref
        raise ConfigError(f"{ref!r} is not an element of {self}")

    def symmetric_generators(self) -> tuple:
        out = []
        for g in self.generators:
            out.append(g)
            out.append(self.inverse(g))
        return tuple(out)

    def sort_key(self, g):
        return (self.length(g), g)

    def ball_sizes(self, R: int) -> list[int]:
        sizes, total = [], 0
        for s in self.sphere_sizes(R):
            total += s
            sizes.append(total)
        return sizes

    def ball(self, R: int) -> list:
        """Elements of word length <= R in breadth-first order."""
        if R < 0:
            raise ValueError("radius must be nonnegative")
        order = [self.identity]
        seen = {self.identity}
        frontier = [self.identity]
        gens = self.symmetric_generators()
        for _ in range(R):
            nxt = []
            for w in frontier:
                for s in gens:
                    x = self.op(s, w)
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            order.extend(nxt)
            frontier = nxt
        return order


@dataclass(frozen=True)
class FreeGroup(WordGroup):
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= 26:
            raise ConfigError("free group rank must be between 1 and 26")

    def __str__(self):
        return f"F{self.rank}"

    @property
    def ngens(self) -> int:
        return self.rank

    @property
    def identity(self) -> tuple:
        return ()

    @cached_property
    def generators(self) -> tuple:
        return tuple((i,) for i in range(1, self.rank + 1))

    def op(self, a: tuple, b: tuple) -> tuple:
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def inverse(self, a: tuple) -> tuple:
        return tuple(-x for x in reversed(a))

    def contains(self, g) -> bool:
        if not isinstance(g, tuple):
            return False
        if any(not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in g):
            return False
        return all(g[i] != -g[i + 1] for i in range(len(g) - 1))

    def reduce(self, letters) -> tuple:
        """Free reduction of an arbitrary signed-letter sequence."""
        out: list[int] = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def length(self, g: tuple) -> int:
        return len(g)

    def format(self, g: tuple) -> str:
        if not g:
            return "e"
        return "".join(string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1]
                       for x in g)

    def sphere_sizes(self, R: int) -> list[int]:
        q = 2 * self.rank - 1
        return [1] + [2 * self.rank * q ** (r - 1) for r in range(1, R + 1)]


@dataclass(frozen=True)
class FreeAbelianGroup(WordGroup):
    dim: int

    def __post_init__(self):
        if not 1 <= self.dim <= 26:
            raise ConfigError("free abelian rank must be between 1 and 26")

    def __str__(self):
        return f"Z^{self.dim}"

    @property
    def ngens(self) -> int:
        return self.dim

    @property
    def identity(self) -> tuple:
        return (0,) * self.dim

    @cached_property
    def generators(self) -> tuple:
        return tuple(tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim))

    def op(self, a: tuple, b: tuple) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a: tuple) -> tuple:
        return tuple(-x for x in a)

    def contains(self, g) -> bool:
        return isinstance(g, tuple) and len(g) == self.dim and all(isinstance(x, int) for x in g)

    def element(self, ref):
        if isinstance(ref, str) and ref.strip().startswith("("):
            try:
                vec = tuple(int(x) for x in ref.strip()[1:-1].split(",") if x.strip())
            except ValueError:
                raise ConfigError(f"cannot parse exponent vector {ref!r}") from None
            ref = vec
        if isinstance(ref, int) and self.dim == 1:
            ref = (ref,)
        if isinstance(ref, list):
            ref = tuple(ref)
        return super().element(ref)

    def length(self, g: tuple) -> int:
        return sum(abs(x) for x in g)

    def format(self, g: tuple) -> str:
        return "(" + ",".join(str(x) for x in g) + ")"

    def sphere_sizes(self, R: int) -> list[int]:
        line = [1] + [2] * R
        out = [1] + [0] * R
        for _ in range(self.dim):
            out = _convolve_counts(out, line, R)
        return out


@dataclass(frozen=True)
class ProductGroup(WordGroup):
    """Direct product of word groups; generator letters run across the factors."""

    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ConfigError("a product needs at least two factors")
        if any(not isinstance(f, (FreeGroup, FreeAbelianGroup)) for f in self.factors):
            raise ConfigError("product factors must be free or free abelian groups")
        if self.ngens > 26:
            raise ConfigError("too many generators in product")

    def __str__(self):
        return "x".join(str(f) for f in self.factors)

    @property
    def ngens(self) -> int:
        return sum(f.ngens for f in self.factors)

    @property
    def identity(self) -> tuple:
        return tuple(f.identity for f in self.factors)

    @cached_property
    def generators(self) -> tuple:
        out = []
        for i, f in enumerate(self.factors):
            for g in f.generators:
                out.append(tuple(g if j == i else h.identity for j, h in enumerate(self.factors)))
        return tuple(out)

    def op(self, a: tuple, b: tuple) -> tuple:
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def inverse(self, a: tuple) -> tuple:
        return tuple(f.inverse(x) for f, x in zip(self.factors, a))

    def contains(self, g) -> bool:
        return (isinstance(g, tuple) and len(g) == len(self.factors)
                and all(f.contains(x) for f, x in zip(self.factors, g)))

    def length(self, g: tuple) -> int:
        return sum(f.length(x) for f, x in zip(self.factors, g))

    def format(self, g: tuple) -> str:
        return "[" + ";".join(f.format(x) for f, x in zip(self.factors, g)) + "]"

    def sphere_sizes(self, R: int) -> list[int]:
        out = [1] + [0] * R
        for f in self.factors:
            out = _convolve_counts(out, f.sphere_sizes(R), R)
        return out


def named_word_group(spec: str) -> WordGroup:
    """Parse ``free:2``, ``F2``, ``zd:1``, ``Z^2`` and products joined by ``*``."""
    s = spec.strip()
    if "*" in s:
        return ProductGroup(tuple(named_word_group(p) for p in s.split("*")))
    kind, _, arg = s.partition(":")
    kind = kind.lower()
    if not arg:
        if kind.startswith("z^"):
            kind, arg = "zd", kind[2:]
        else:
            head = kind.rstrip("0123456789")
            kind, arg = head, kind[len(head):]
    try:
        if kind in ("free", "f"):
            return FreeGroup(int(arg))
        if kind in ("zd", "z^", "freeabelian", "free_abelian", "abelian"):
            return FreeAbelianGroup(int(arg))
    except ValueError:
        pass
    raise ConfigError(f"unknown word group {spec!r}")
