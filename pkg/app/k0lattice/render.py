"""Human-readable rendering for ``--format pretty`` and the REPL."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exceptional import ExceptionalTuple, is_exceptional, tuple_gram
from .isometry import GeneratorSet, IsometryDescriptor
from .lattice import BasisTag, K0Class
from .linalg import QMatrix


def _symbol(basis: BasisTag, i: int) -> str:
    if basis is BasisTag.LINE_BUNDLE:
        return "O" if i == 0 else f"O({i})"
    if basis is BasisTag.STRUCTURE_SHEAF:
        return f"O_P{i}"
    return "1" if i == 0 else ("t" if i == 1 else f"t^{i}")


def _terms(pairs: Sequence[tuple[Fraction, str]]) -> str:
    out = ""
    for c, sym in pairs:
        if c == 0:
            continue
        mag = abs(c)
        if sym == "1":
            body = str(mag)
        else:
            body = sym if mag == 1 else f"{mag}·{sym}"
        if not out:
            out = body if c > 0 else f"-{body}"
        else:
            out += f" + {body}" if c > 0 else f" - {body}"
    return out or "0"


def render_class(e: K0Class, basis: BasisTag | None = None) -> str:
    """Terms in descending index, e.g. ``O_P2 + 2·O_P1 + 3·O_P0``."""
    e = e.to(basis) if basis is not None else e
    pairs = [(e.coeffs[i], _symbol(e.basis, i)) for i in reversed(range(e.n + 1))]
    return _terms(pairs)


def render_matrix(m: QMatrix) -> str:
    cells = [[str(x) for x in row] for row in m]
    if not cells:
        return "[]"
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)


def render_descriptor(d: IsometryDescriptor) -> str:
    pairs = [(a, "D" if i == 0 else f"D^{2 * i + 1}") for i, a in enumerate(d.odd)]
    body = _terms(pairs)
    sign = "" if d.sign == 1 else "-"
    return f"{sign}exp({body})" if body != "0" else f"{sign}Id"


def render_generator_set(gs: GeneratorSet) -> str:
    lines = [f"n={gs.n}: {len(gs.generators)} generator(s)"]
    for i, (g, cls) in enumerate(zip(gs.generators, gs.tensor_classes())):
        coeffs = ", ".join(str(a) for a in g.odd)
        lines.append(f"  [{i}] a=({coeffs})  {render_descriptor(g)}")
        lines.append(f"      E -> E (x) ({render_class(cls, BasisTag.STRUCTURE_SHEAF)})")
    lines.append("  hnf:")
    lines.extend("    " + line for line in render_matrix(gs.basis).splitlines())
    return "\n".join(lines)


def render_tuple(t: ExceptionalTuple, with_gram: bool = True) -> str:
    lines = [f"  E{i} = {render_class(e)}" for i, e in enumerate(t.classes)]
    if with_gram:
        lines.append("gram:")
        lines.extend("  " + line for line in render_matrix(tuple_gram(t)).splitlines())
        lines.append(f"exceptional: {'yes' if is_exceptional(t) else 'NO'}")
    return "\n".join(lines)
