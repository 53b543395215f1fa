"""Complete deterministic automata and their transition semigroups."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .errors import ParseError, PreconditionError
from .semigroup_engine import FiniteSemigroup, close, depth, kernel
from .transform_core import PartialMap


@dataclass(frozen=True)
class Automaton:
    n: int
    letters: tuple[tuple[str, PartialMap], ...]

    def __post_init__(self):
        if not self.letters:
            raise PreconditionError("an automaton needs at least one letter")
        for name, f in self.letters:
            if f.degree != self.n:
                raise PreconditionError(f"letter {name} acts on {f.degree} states, expected {self.n}")
            if not f.is_total():
                raise PreconditionError(f"letter {name} is not total")

    @classmethod
    def from_dict(cls, data: dict) -> "Automaton":
        try:
            n = int(data["n"])
            letters = tuple((str(k), PartialMap.of(v)) for k, v in data["letters"].items())
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"bad automaton description: {exc}") from None
        return cls(n, letters)

    @classmethod
    def from_json(cls, text: str) -> "Automaton":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {"n": self.n, "letters": {k: list(f.images) for k, f in self.letters}}

    @property
    def names(self) -> list[str]:
        return [k for k, _ in self.letters]


def cerny(n: int) -> Automaton:
    """The n-state Cerny automaton: a cycle and a letter merging state 1 into 2."""
    if n < 2:
        raise PreconditionError("need at least two states")
    a = PartialMap.of(list(range(2, n + 1)) + [1])
    b = PartialMap.of([2] + list(range(2, n + 1)))
    return Automaton(n, (("a", a), ("b", b)))


def transition_semigroup(A: Automaton, budget: int | None = None) -> FiniteSemigroup:
    return close([f for _, f in A.letters], budget=budget)


def _letter_tables(A: Automaton) -> list[list[int]]:
    return [[v - 1 for v in f.images] for _, f in A.letters]


def _image(mask: int, table: list[int]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << table[low.bit_length() - 1]
        mask ^= low
    return out


def _subset_bfs(A: Automaton):
    """Breadth-first search over images Q.w; returns parent pointers in discovery order."""
    tables = _letter_tables(A)
    full = (1 << A.n) - 1
    parent: dict[int, tuple[int, int] | None] = {full: None}
    queue = deque([full])
    while queue:
        s = queue.popleft()
        for k, t in enumerate(tables):
            img = _image(s, t)
            if img not in parent:
                parent[img] = (s, k)
                queue.append(img)
    return parent


def automaton_rank(A: Automaton) -> int:
    """Least size of an image Q.w."""
    return min(bin(s).count("1") for s in _subset_bfs(A))


def is_synchronizing(A: Automaton) -> bool:
    return automaton_rank(A) == 1


def shortest_terminal_word(A: Automaton) -> tuple[int, list[str]]:
    """A shortest word whose image has the least possible size, ties broken by letter order."""
    tables = _letter_tables(A)
    target = automaton_rank(A)
    full = (1 << A.n) - 1
    parent: dict[int, tuple[int, int] | None] = {full: None}
    queue = deque([full])
    goal = full if bin(full).count("1") == target else None
    while goal is None:
        s = queue.popleft()
        for k, t in enumerate(tables):
            img = _image(s, t)
            if img not in parent:
                parent[img] = (s, k)
                if bin(img).count("1") == target:
                    goal = img
                    break
                queue.append(img)
    word = []
    s = goal
    while parent[s] is not None:
        s, k = parent[s]
        word.append(A.names[k])
    word.reverse()
    return len(word), word


def terminal_length_via_semigroup(A: Automaton, budget: int | None = None) -> int:
    """The same length computed as the depth of the transition semigroup over the letters."""
    S = transition_semigroup(A, budget)
    return depth(S)


def analyze(A: Automaton, semigroup: bool = True, budget: int | None = None) -> dict:
    length, word = shortest_terminal_word(A)
    out = {
        "states": A.n,
        "letters": A.names,
        "rank": automaton_rank(A),
        "synchronizing": is_synchronizing(A),
        "shortest_terminal_length": length,
        "shortest_terminal_word": "".join(word) if all(len(x) == 1 for x in A.names) else word,
    }
    if semigroup:
        S = transition_semigroup(A, budget)
        out["semigroup_order"] = S.order
        out["semigroup_depth"] = depth(S)
        out["kernel_rank"] = kernel(S).t_value
        out["routes_agree"] = out["semigroup_depth"] == length and out["kernel_rank"] == out["rank"]
    return out
