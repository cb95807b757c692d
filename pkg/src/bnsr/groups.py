"""Group models with exact normal forms, and rational characters on them.

Three kinds of groups are supported: free abelian groups (elements are
integer exponent vectors), free groups (elements are freely reduced words,
stored as tuples of signed 1-based generator indices), and finite direct
products of these (elements are tuples of factor normal forms, aligned with
the flattened factor list).
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


def _default_abelian_labels(rank: int) -> tuple[str, ...]:
    if rank == 1:
        return ("t",)
    return tuple(f"t{i + 1}" for i in range(rank))


def _default_free_labels(rank: int) -> tuple[str, ...]:
    if rank <= 26:
        return tuple(string.ascii_lowercase[:rank])
    return tuple(f"g{i + 1}" for i in range(rank))


@dataclass(frozen=True)
class Group:
    """Common interface of the three supported group kinds."""

    generators: tuple[str, ...]

    @property
    def char_dim(self) -> int:
        """Dimension of the character space (torsion-free rank of G/G')."""
        return len(self.generators)

    def factors(self) -> tuple["Group", ...]:
        return (self,)

    def element_parts(self, g) -> tuple:
        """Per-factor normal forms of ``g`` (length 1 unless a product)."""
        return (g,)

    def identity(self):
        raise NotImplementedError

    def check_element(self, g) -> None:
        raise NotImplementedError

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def exponents(self, g) -> tuple[int, ...]:
        """Abelianized exponent vector of ``g``, indexed like ``generators``."""
        raise NotImplementedError

    def distance(self, g) -> int:
        """Window distance from the identity (box norm / word length)."""
        raise NotImplementedError

    def ball(self, radius) -> tuple:
        """All elements within window distance ``radius`` of the identity."""
        raise NotImplementedError

    def element_to_obj(self, g):
        raise NotImplementedError

    def element_from_obj(self, obj):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FreeAbelian(Group):
    rank: int = 0

    def __init__(self, rank: int, generators: Sequence[str] | None = None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        labels = tuple(generators) if generators is not None else _default_abelian_labels(rank)
        if len(labels) != rank or len(set(labels)) != rank:
            raise ValueError("need exactly one distinct label per generator")
        object.__setattr__(self, "generators", labels)
        object.__setattr__(self, "rank", rank)

    def identity(self):
        return (0,) * self.rank

    def check_element(self, g) -> None:
        if not (isinstance(g, tuple) and len(g) == self.rank and all(isinstance(e, int) for e in g)):
            raise ValueError(f"{g!r} is not an exponent vector of length {self.rank}")

    def multiply(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        self.check_element(g)
        return tuple(-a for a in g)

    def exponents(self, g):
        self.check_element(g)
        return g

    def generator_element(self, i: int):
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def distance(self, g) -> int:
        return max((abs(e) for e in g), default=0)

    def ball(self, radius) -> tuple:
        return _abelian_ball(self.rank, radius)

    def element_to_obj(self, g):
        return list(g)

    def element_from_obj(self, obj):
        g = tuple(int(e) for e in obj)
        self.check_element(g)
        return g

    def element_str(self, g) -> str:
        if all(e == 0 for e in g):
            return "1"
        return "*".join(
            lab if e == 1 else f"{lab}^{e}" for lab, e in zip(self.generators, g) if e != 0
        )

    def to_dict(self):
        return {"kind": "free_abelian", "rank": self.rank, "generators": list(self.generators)}


@lru_cache(maxsize=256)
def _abelian_ball(rank: int, radius: int) -> tuple:
    return tuple(itertools.product(range(-radius, radius + 1), repeat=rank))


@dataclass(frozen=True)
class Free(Group):
    rank: int = 0

    def __init__(self, rank: int, generators: Sequence[str] | None = None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        labels = tuple(generators) if generators is not None else _default_free_labels(rank)
        if len(labels) != rank or len(set(labels)) != rank:
            raise ValueError("need exactly one distinct label per generator")
        object.__setattr__(self, "generators", labels)
        object.__setattr__(self, "rank", rank)

    def identity(self):
        return ()

    def check_element(self, g) -> None:
        if not isinstance(g, tuple):
            raise ValueError(f"{g!r} is not a word tuple")
        for x in g:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise ValueError(f"letter {x!r} out of range for rank {self.rank}")
        for a, b in zip(g, g[1:]):
            if a == -b:
                raise ValueError(f"word {g!r} is not freely reduced")

    def reduce_word(self, letters: Iterable[int]) -> tuple[int, ...]:
        out: list[int] = []
        for x in letters:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def multiply(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return self.reduce_word(itertools.chain(g, h))

    def inverse(self, g):
        self.check_element(g)
        return tuple(-x for x in reversed(g))

    def exponents(self, g):
        self.check_element(g)
        counts = [0] * self.rank
        for x in g:
            counts[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(counts)

    def generator_element(self, i: int):
        return (i + 1,)

    def distance(self, g) -> int:
        return len(g)

    def ball(self, radius) -> tuple:
        return _free_ball(self.rank, radius)

    def word(self, text: str) -> tuple[int, ...]:
        """Parse a word like "a b^-1 a^2" or "ab" over single-letter generators."""
        tokens: list[str] = []
        for chunk in text.replace("*", " ").split():
            tokens.append(chunk)
        if len(tokens) == 1 and "^" not in tokens[0] and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        letters: list[int] = []
        index = {lab: i + 1 for i, lab in enumerate(self.generators)}
        for tok in tokens:
            if "^" in tok:
                base, exp = tok.split("^", 1)
                e = int(exp)
            else:
                base, e = tok, 1
            if base not in index:
                raise ValueError(f"unknown generator {base!r}")
            letters.extend([index[base] if e > 0 else -index[base]] * abs(e))
        return self.reduce_word(letters)

    def element_to_obj(self, g):
        out = []
        for x in g:
            lab = self.generators[abs(x) - 1]
            out.append(lab if x > 0 else f"{lab}^-1")
        return out

    def element_from_obj(self, obj):
        index = {lab: i + 1 for i, lab in enumerate(self.generators)}
        letters = []
        for item in obj:
            if item.endswith("^-1"):
                letters.append(-index[item[:-3]])
            else:
                letters.append(index[item])
        g = self.reduce_word(letters)
        self.check_element(g)
        return g

    def element_str(self, g) -> str:
        if not g:
            return "1"
        return "*".join(self.element_to_obj(g)).replace("*", " ")

    def to_dict(self):
        return {"kind": "free", "rank": self.rank, "generators": list(self.generators)}


@lru_cache(maxsize=64)
def _free_ball(rank: int, radius: int) -> tuple:
    words: list[tuple[int, ...]] = [()]
    frontier: list[tuple[int, ...]] = [()]
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        words.extend(nxt)
        frontier = nxt
    return tuple(words)


@dataclass(frozen=True)
class Product(Group):
    parts: tuple[Group, ...] = ()

    def __init__(self, parts: Sequence[Group]):
        flat: list[Group] = []
        for p in parts:
            if isinstance(p, Product):
                flat.extend(p.parts)
            else:
                flat.append(p)
        if not flat:
            raise ValueError("product needs at least one factor")
        labels = tuple(lab for p in flat for lab in p.generators)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate generator labels across factors")
        object.__setattr__(self, "parts", tuple(flat))
        object.__setattr__(self, "generators", labels)

    def factors(self) -> tuple[Group, ...]:
        return self.parts

    def element_parts(self, g) -> tuple:
        return g

    def identity(self):
        return tuple(p.identity() for p in self.parts)

    def check_element(self, g) -> None:
        if not (isinstance(g, tuple) and len(g) == len(self.parts)):
            raise ValueError(f"{g!r} does not have {len(self.parts)} components")
        for p, comp in zip(self.parts, g):
            p.check_element(comp)

    def multiply(self, g, h):
        self.check_element(g)
        self.check_element(h)
        return tuple(p.multiply(a, b) for p, a, b in zip(self.parts, g, h))

    def inverse(self, g):
        self.check_element(g)
        return tuple(p.inverse(a) for p, a in zip(self.parts, g))

    def exponents(self, g):
        self.check_element(g)
        out: list[int] = []
        for p, comp in zip(self.parts, g):
            out.extend(p.exponents(comp))
        return tuple(out)

    def distance(self, g) -> int:
        return max(p.distance(comp) for p, comp in zip(self.parts, g))

    def ball(self, radius) -> tuple:
        if isinstance(radius, int):
            radii = (radius,) * len(self.parts)
        else:
            radii = tuple(radius)
            if len(radii) != len(self.parts):
                raise ValueError("need one radius per factor")
        return tuple(itertools.product(*(p.ball(r) for p, r in zip(self.parts, radii))))

    def element_to_obj(self, g):
        return [p.element_to_obj(comp) for p, comp in zip(self.parts, g)]

    def element_from_obj(self, obj):
        g = tuple(p.element_from_obj(item) for p, item in zip(self.parts, obj))
        self.check_element(g)
        return g

    def element_str(self, g) -> str:
        return "(" + ", ".join(p.element_str(comp) for p, comp in zip(self.parts, g)) + ")"

    def to_dict(self):
        return {"kind": "product", "factors": [p.to_dict() for p in self.parts]}


def _primed(labels: Iterable[str], taken: set[str]) -> list[str]:
    out = []
    for lab in labels:
        new = lab
        while new in taken:
            new += "'"
        taken.add(new)
        out.append(new)
    return out


def _relabel(g: Group, taken: set[str]) -> Group:
    labels = _primed(g.generators, taken)
    if isinstance(g, FreeAbelian):
        return FreeAbelian(g.rank, labels)
    if isinstance(g, Free):
        return Free(g.rank, labels)
    if isinstance(g, Product):
        parts = []
        pos = 0
        for p in g.parts:
            parts.append(_relabel_with(p, labels[pos : pos + p.char_dim]))
            pos += p.char_dim
        return Product(parts)
    raise TypeError(f"unsupported group {g!r}")


def _relabel_with(g: Group, labels: Sequence[str]) -> Group:
    if isinstance(g, FreeAbelian):
        return FreeAbelian(g.rank, labels)
    if isinstance(g, Free):
        return Free(g.rank, labels)
    if isinstance(g, Product):
        parts = []
        pos = 0
        for p in g.parts:
            parts.append(_relabel_with(p, labels[pos : pos + p.char_dim]))
            pos += p.char_dim
        return Product(parts)
    raise TypeError(f"unsupported group {g!r}")


def product(left: Group, right: Group) -> Product:
    """Flattened direct product; clashing generator labels get primed."""
    taken = set(left.generators)
    right2 = right if not (taken & set(right.generators)) else _relabel(right, taken)
    return Product((left, right2))


def pair_element(left: Group, right: Group, g, h):
    """Combine factor elements into an element of ``product(left, right)``."""
    return tuple(left.element_parts(g)) + tuple(right.element_parts(h))


def split_element(left: Group, right: Group, gh):
    """Inverse of :func:`pair_element` for the flattened product."""
    nl = len(left.factors())
    gparts, hparts = gh[:nl], gh[nl:]
    g = gparts if isinstance(left, Product) else gparts[0]
    h = hparts if isinstance(right, Product) else hparts[0]
    return g, h


def group_from_dict(data: dict) -> Group:
    kind = data["kind"]
    if kind == "free_abelian":
        return FreeAbelian(data["rank"], data.get("generators"))
    if kind == "free":
        return Free(data["rank"], data.get("generators"))
    if kind == "product":
        return Product([group_from_dict(f) for f in data["factors"]])
    raise ValueError(f"unknown group kind {kind!r}")


def parse_group(spec: str) -> Group:
    """Parse a compact group spec: "free:2", "abelian:3", "product:free:2,abelian:1"."""
    if spec.startswith("product:"):
        return _parse_product(spec[len("product:") :])
    kind, _, rank = spec.partition(":")
    if not rank.isdigit():
        raise ValueError(f"bad group spec {spec!r}")
    if kind in ("abelian", "free_abelian"):
        return FreeAbelian(int(rank))
    if kind == "free":
        return Free(int(rank))
    raise ValueError(f"unknown group kind {kind!r}")


def _parse_product(body: str) -> Group:
    specs = body.split(",")
    if len(specs) < 2:
        raise ValueError("product spec needs at least two factors")
    g = parse_group(specs[0])
    for s in specs[1:]:
        g = product(g, parse_group(s))
    return g


@dataclass(frozen=True)
class Character:
    """Rational homomorphism to the reals, given by one value per generator."""

    group: Group
    coeffs: tuple[Fraction, ...]

    def __init__(self, group: Group, coeffs: Sequence):
        vals = tuple(Fraction(c) for c in coeffs)
        if len(vals) != group.char_dim:
            raise ValueError(
                f"need {group.char_dim} coefficients, got {len(vals)}"
            )
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", vals)

    def evaluate(self, g) -> Fraction:
        exps = self.group.exponents(g)
        return sum((c * e for c, e in zip(self.coeffs, exps)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def scale(self, r) -> "Character":
        r = Fraction(r)
        return Character(self.group, tuple(c * r for c in self.coeffs))

    def to_dict(self) -> dict:
        return {"group": self.group.to_dict(), "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_dict(data: dict) -> "Character":
        return Character(group_from_dict(data["group"]), [Fraction(c) for c in data["coeffs"]])


def zero_character(group: Group) -> Character:
    return Character(group, (Fraction(0),) * group.char_dim)


def evaluate_character(chi: Character, g) -> Fraction:
    return chi.evaluate(g)


def monoid_member(chi: Character, g) -> bool:
    """Whether ``g`` lies in the monoid of elements with nonnegative value."""
    return chi.evaluate(g) >= 0


def sum_character(chi: Character, chi2: Character) -> Character:
    """The character (g,h) -> chi(g) + chi2(h) on the product group."""
    amb = product(chi.group, chi2.group)
    return Character(amb, chi.coeffs + chi2.coeffs)


@dataclass(frozen=True)
class Direction:
    """Positive-scaling class of a nonzero character: a primitive integer vector."""

    group: Group
    vector: tuple[int, ...]

    def __init__(self, group: Group, vector: Sequence[int]):
        vec = tuple(int(v) for v in vector)
        if all(v == 0 for v in vec):
            raise ValueError("direction vector must be nonzero")
        g = 0
        for v in vec:
            g = gcd(g, abs(v))
        if g != 1:
            raise ValueError(f"{vec!r} is not primitive")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "vector", vec)

    def character(self) -> Character:
        return Character(self.group, self.vector)


def direction_of(chi: Character) -> Direction:
    """Canonical primitive integer vector of a nonzero character class."""
    if chi.is_zero:
        raise ValueError("the zero character has no direction")
    denom_lcm = 1
    for c in chi.coeffs:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in chi.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return Direction(chi.group, tuple(v // g for v in ints))


def multiply(g, h, group: Group):
    """Normal form of the product gh in ``group``."""
    return group.multiply(g, h)
