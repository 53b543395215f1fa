"""Partial transformations of {1..n}, composed left to right.

A map is stored as a tuple of 1-based images with ``UNDEF`` (0) marking
points outside the domain.  ``compose(f, g)`` applies ``f`` first, so
``x(fg) = (xf)g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegreeMismatchError, ParseError

UNDEF = 0


@dataclass(frozen=True, slots=True)
class PartialMap:
    degree: int
    images: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        if len(self.images) != self.degree:
            raise ValueError(f"expected {self.degree} images, got {len(self.images)}")
        for v in self.images:
            if v != UNDEF and not 1 <= v <= self.degree:
                raise ValueError(f"image {v} out of range 1..{self.degree}")

    @classmethod
    def of(cls, images: Sequence[int | None]) -> "PartialMap":
        """Build from 1-based images; ``None`` or 0 means undefined."""
        imgs = tuple(UNDEF if v is None else int(v) for v in images)
        return cls(len(imgs), imgs)

    @classmethod
    def identity(cls, n: int) -> "PartialMap":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartialMap":
        return cls(n, (UNDEF,) * n)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "PartialMap") -> "PartialMap":
        return compose(self, other)

    def __str__(self) -> str:
        return format_map(self)

    def is_total(self) -> bool:
        return UNDEF not in self.images

    def is_injective(self) -> bool:
        defined = [v for v in self.images if v != UNDEF]
        return len(defined) == len(set(defined))


def compose(f: PartialMap, g: PartialMap) -> PartialMap:
    if f.degree != g.degree:
        raise DegreeMismatchError(f"cannot compose maps of degree {f.degree} and {g.degree}")
    gi = g.images
    return PartialMap(f.degree, tuple(UNDEF if v == UNDEF else gi[v - 1] for v in f.images))


def dom(f: PartialMap) -> frozenset[int]:
    return frozenset(x for x, v in enumerate(f.images, 1) if v != UNDEF)


def im(f: PartialMap) -> frozenset[int]:
    return frozenset(v for v in f.images if v != UNDEF)


def rank(f: PartialMap) -> int:
    return len(im(f))


def is_order_preserving(f: PartialMap) -> bool:
    defined = [v for v in f.images if v != UNDEF]
    return all(a <= b for a, b in zip(defined, defined[1:]))


def kernel_classes(f: PartialMap) -> list[frozenset[int]]:
    """Blocks of the kernel of ``f`` restricted to its domain."""
    blocks: dict[int, set[int]] = {}
    for x, v in enumerate(f.images, 1):
        if v != UNDEF:
            blocks.setdefault(v, set()).add(x)
    return sorted((frozenset(b) for b in blocks.values()), key=min)


_TOKEN = re.compile(r"\s*(?:(-)|(\d+)|(\S))")


def parse(text: str) -> PartialMap:
    """Parse ``"[2 1 -]"`` or ``"[2,1,-]"`` into a map of degree 3."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"expected a bracketed list, got {text!r}")
    body = s[1:-1].replace(",", " ")
    tokens: list[int | None] = []
    for m in _TOKEN.finditer(body):
        dash, num, bad = m.groups()
        if bad is not None:
            raise ParseError(f"malformed token {bad!r} at offset {m.start(3) + 1}", column=m.start(3) + 2)
        if dash:
            tokens.append(None)
        elif num:
            tokens.append(int(num))
    if not tokens:
        raise ParseError("a map needs at least one image")
    n = len(tokens)
    for v in tokens:
        if v is not None and not 1 <= v <= n:
            raise ParseError(f"image {v} out of range 1..{n}")
    return PartialMap.of(tokens)


def format_map(f: PartialMap) -> str:
    return "[" + " ".join("-" if v == UNDEF else str(v) for v in f.images) + "]"


def parse_many(lines: Iterable[str]) -> list[PartialMap]:
    maps = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            maps.append(parse(line))
        except ParseError as e:
            raise ParseError(str(e), line=lineno, column=e.column) from None
    return maps
