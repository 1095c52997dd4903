from __future__ import annotations

import logging
from collections import deque
from typing import Deque, Optional

from .errors import K0Error
from .exceptional import (
    Direction,
    ExceptionalTuple,
    apply_isometry,
    mutate,
    parse_word,
    standard_tuple,
    tuple_gram,
)
from .isometry import DEFAULT_BUDGET, GeneratorSet, compute_generators, negation
from .render import render_matrix, render_tuple

log = logging.getLogger(__name__)

UNDO_DEPTH = 100

HELP = """\
commands:
  g<i>           forward mutation at position i
  g<i>'          inverse mutation at position i
  g0 g1' ...     several steps, left to right
  isom <k>       apply generator k of the lattice isometry group (isom <k>' for its inverse)
  isom neg       apply E -> -E
  gram           show the Gram matrix
  undo           revert the last step
  reset          back to (O, O(1), ..., O(n))
  help           this text
  quit           leave"""


class QuitSession(Exception):
    pass


class MutationSession:
    def __init__(self, n: int, budget: int = DEFAULT_BUDGET) -> None:
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        self.n = n
        self.budget = budget
        self.current: ExceptionalTuple = standard_tuple(n, 0)
        self.history: Deque[ExceptionalTuple] = deque(maxlen=UNDO_DEPTH)
        self._generators: Optional[GeneratorSet] = None

    @property
    def generators(self) -> GeneratorSet:
        # computed on first "isom"
        if self._generators is None:
            self._generators = compute_generators(self.n, self.budget)
        return self._generators

    def _push(self, t: ExceptionalTuple) -> str:
        self.history.append(self.current)
        self.current = t
        return render_tuple(t)

    def handle(self, line: str) -> str:
        """Run one command and return the text to show. Raises QuitSession on quit."""
        line = line.strip()
        if not line:
            return ""
        cmd, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if cmd in ("quit", "exit", "q"):
                raise QuitSession()
            if cmd == "help":
                return HELP
            if cmd == "gram":
                return render_matrix(tuple_gram(self.current))
            if cmd == "show":
                return render_tuple(self.current)
            if cmd == "undo":
                if not self.history:
                    return "nothing to undo"
                self.current = self.history.pop()
                return render_tuple(self.current)
            if cmd == "reset":
                return self._push(standard_tuple(self.n, 0))
            if cmd == "isom":
                return self._isom(rest)
            word = parse_word(line, self.n)
            t = self.current
            for i, direction in word:
                t = mutate(t, i, Direction(direction))
            return self._push(t)
        except QuitSession:
            raise
        except (K0Error, ValueError) as e:
            log.debug("repl command %r failed: %s", line, e)
            return f"error: {e}"

    def _isom(self, arg: str) -> str:
        if arg == "neg":
            return self._push(apply_isometry(self.current, negation(self.n)))
        inverse = arg.endswith("'")
        arg = arg.rstrip("'")
        if not arg.isdigit():
            return "error: usage: isom <index> | isom <index>' | isom neg"
        gens = self.generators.generators
        k = int(arg)
        if k >= len(gens):
            return f"error: generator index {k} outside 0..{len(gens) - 1}"
        d = gens[k].inverse() if inverse else gens[k]
        return self._push(apply_isometry(self.current, d))
