"""Exceptional bases of K0 and the braid group action on them.

Convention for the generator g_i acting on (E_0, ..., E_n):

    g_i  : (E_i, E_{i+1}) -> (E_{i+1} - chi(E_i, E_{i+1}) E_i, E_i)
    g_i' : (E_i, E_{i+1}) -> (E_{i+1}, E_i - chi(E_i, E_{i+1}) E_{i+1})

Words are applied left to right.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatch, MalformedWord, MutationIndexError, NotALatticeIsometry
from .isometry import IsometryDescriptor, is_lattice_isometry, isometry_obstruction
from .lattice import BasisTag, K0Class, chi, is_lattice, line_bundle
from .linalg import QMatrix
from .operators import apply

log = logging.getLogger(__name__)


class Direction(str, Enum):
    FWD = "fwd"
    INV = "inv"

    def flipped(self) -> "Direction":
        return Direction.INV if self is Direction.FWD else Direction.FWD


MutationStep = tuple[int, Direction]
MutationWord = tuple[MutationStep, ...]

_STEP_RE = re.compile(r"^g(\d+)('?)$")


@dataclass(frozen=True)
class ExceptionalTuple:
    n: int
    classes: tuple[K0Class, ...]

    def __post_init__(self) -> None:
        classes = tuple(self.classes)
        if len(classes) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} classes for n={self.n}, got {len(classes)}")
        for e in classes:
            if e.n != self.n:
                raise ValueError(f"class of dimension {e.n} in a tuple for n={self.n}")
        object.__setattr__(self, "classes", tuple(e.to(BasisTag.LINE_BUNDLE) for e in classes))

    def __len__(self) -> int:
        return len(self.classes)

    def __getitem__(self, i: int) -> K0Class:
        return self.classes[i]

    def replace(self, i: int, first: K0Class, second: K0Class) -> "ExceptionalTuple":
        items = list(self.classes)
        items[i], items[i + 1] = first, second
        return ExceptionalTuple(self.n, tuple(items))


def standard_tuple(n: int, m: int = 0) -> ExceptionalTuple:
    """(O(m), O(m+1), ..., O(m+n))."""
    return ExceptionalTuple(n, tuple(line_bundle(n, m + i) for i in range(n + 1)))


def tuple_gram(t: ExceptionalTuple) -> QMatrix:
    return tuple(tuple(chi(e, f) for f in t.classes) for e in t.classes)


def coefficient_matrix(t: ExceptionalTuple) -> QMatrix:
    """Rows are line bundle coordinates of the entries."""
    return tuple(e.coeffs for e in t.classes)


def is_lattice_basis(t: ExceptionalTuple) -> bool:
    if not all(is_lattice(e) for e in t.classes):
        return False
    return abs(linalg.det(coefficient_matrix(t))) == 1


def gram_is_unitriangular(g: QMatrix) -> bool:
    return all(g[i][i] == 1 and all(g[i][j] == 0 for j in range(i)) for i in range(len(g)))


def is_exceptional(t: ExceptionalTuple) -> bool:
    return gram_is_unitriangular(tuple_gram(t)) and is_lattice_basis(t)


def _index_message(i: int, n: int) -> str:
    if n == 0:
        return "no adjacent pairs to mutate for n=0"
    return f"mutation index {i} outside 0..{n - 1}"


def mutate(t: ExceptionalTuple, i: int, direction: Direction = Direction.FWD) -> ExceptionalTuple:
    if not 0 <= i < t.n:
        raise MutationIndexError(_index_message(i, t.n))
    direction = Direction(direction)
    e, f = t[i], t[i + 1]
    c = chi(e, f)
    if direction is Direction.FWD:
        return t.replace(i, f - c * e, e)
    return t.replace(i, f, e - c * f)


def apply_word(t: ExceptionalTuple, word: Sequence[MutationStep]) -> ExceptionalTuple:
    for i, direction in word:
        t = mutate(t, i, direction)
    log.debug("applied %s to a tuple for n=%d", format_word(word) or "(empty word)", t.n)
    return t


def parse_word(text: str, n: int | None = None) -> MutationWord:
    """Parse "g0 g1' g0"; an apostrophe marks the inverse generator.

    With ``n`` given, indices are also range-checked.
    """
    steps = []
    for token in text.replace(",", " ").split():
        m = _STEP_RE.match(token)
        if m is None:
            raise MalformedWord(f"cannot parse mutation step {token!r}")
        i = int(m.group(1))
        if n is not None and not 0 <= i < n:
            raise MalformedWord(_index_message(i, n))
        steps.append((i, Direction.INV if m.group(2) else Direction.FWD))
    return tuple(steps)


def format_word(word: Iterable[MutationStep]) -> str:
    return " ".join(f"g{i}'" if d is Direction.INV else f"g{i}" for i, d in word)


def invert_word(word: Sequence[MutationStep]) -> MutationWord:
    return tuple((i, Direction(d).flipped()) for i, d in reversed(word))


def apply_isometry(t: ExceptionalTuple, d: IsometryDescriptor) -> ExceptionalTuple:
    if d.n != t.n:
        raise DimensionMismatch(t.n, d.n)
    if not is_lattice_isometry(d):
        raise NotALatticeIsometry(isometry_obstruction(d) or "not a lattice isometry")
    s = d.series()
    return ExceptionalTuple(t.n, tuple(apply(s, e) for e in t.classes))


def random_word(rng, n: int, length: int) -> MutationWord:
    """Uniform random word; ``rng`` is a ``random.Random``."""
    if n < 1:
        return ()
    return tuple(
        (rng.randrange(n), Direction.FWD if rng.random() < 0.5 else Direction.INV) for _ in range(length)
    )

