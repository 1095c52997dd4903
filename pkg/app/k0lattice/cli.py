from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from .codec import (
    ClassPayload,
    DescriptorPayload,
    GeneratorSetPayload,
    GramPayload,
    IsometryReport,
    MatrixPayload,
    MutationReport,
    PartialTable,
    TuplePayload,
    dump,
    isometry_input_adapter,
)
from .errors import BudgetExceeded, K0Error, MalformedWord
from .exceptional import apply_word, format_word, parse_word, standard_tuple
from .isometry import (
    DEFAULT_BUDGET,
    classify_isometry,
    compute_generators,
    is_lattice_isometry,
    isometry_obstruction,
)
from .lattice import BasisTag, chi, gram_matrix, rank_c1
from .operators import kappa
from .render import render_class, render_descriptor, render_generator_set, render_matrix, render_tuple
from .repl import MutationSession, QuitSession
from .tensor import operator_class, tensor

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_SEMANTIC = 3
EXIT_BUDGET = 4

BASIS_CHOICES = [b.value for b in BasisTag]


class UsageError(Exception):
    pass


class CliConfig(BaseModel):
    n: Optional[int] = Field(default=None, ge=0)
    format: Literal["json", "pretty"] = "json"
    input: Optional[str] = None  # path, or "-" for stdin
    budget: int = Field(default=DEFAULT_BUDGET, gt=0)
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        return cls(
            n=getattr(args, "n", None),
            format=args.format,
            input=getattr(args, "input", None),
            budget=getattr(args, "budget", DEFAULT_BUDGET),
            verbose=args.verbose,
        )

    @property
    def pretty(self) -> bool:
        return self.format == "pretty"


def _emit(cfg: CliConfig, model: BaseModel, pretty: str) -> None:
    print(pretty if cfg.pretty else dump(model))


def _read_input(cfg: CliConfig) -> Any:
    if cfg.input == "-":
        text = sys.stdin.read()
    else:
        text = Path(cfg.input).read_text(encoding="utf-8")
    return json.loads(text)


def _documents(args: argparse.Namespace, cfg: CliConfig, count: int) -> List[Any]:
    """``count`` JSON documents from positionals or from --input (an object, or a list for several)."""
    if cfg.input is not None:
        data = _read_input(cfg)
        docs = [data] if count == 1 and isinstance(data, dict) else data
    else:
        docs = [json.loads(s) for s in (args.items or [])]
    if not isinstance(docs, list) or len(docs) != count:
        raise UsageError(f"expected {count} JSON document(s)")
    return docs


def _classes(args: argparse.Namespace, cfg: CliConfig, count: int):
    return [ClassPayload.model_validate(d).to_class() for d in _documents(args, cfg, count)]


async def cmd_gram(args: argparse.Namespace, cfg: CliConfig) -> int:
    if cfg.n is None:
        raise UsageError("gram needs --n")
    g = gram_matrix(cfg.n, BasisTag(args.basis))
    _emit(cfg, GramPayload.of(g), render_matrix(g.entries))
    return EXIT_OK


async def cmd_chi(args: argparse.Namespace, cfg: CliConfig) -> int:
    e, f = _classes(args, cfg, 2)
    value = chi(e, f)
    print(value if cfg.pretty else json.dumps(str(value)))
    return EXIT_OK


async def cmd_convert(args: argparse.Namespace, cfg: CliConfig) -> int:
    (e,) = _classes(args, cfg, 1)
    out = e.to(BasisTag(args.basis))
    _emit(cfg, ClassPayload.of(out), render_class(out))
    return EXIT_OK


async def cmd_tensor(args: argparse.Namespace, cfg: CliConfig) -> int:
    e, f = _classes(args, cfg, 2)
    out = tensor(e, f)
    _emit(cfg, ClassPayload.of(out), render_class(out))
    return EXIT_OK


async def cmd_rank(args: argparse.Namespace, cfg: CliConfig) -> int:
    (e,) = _classes(args, cfg, 1)
    rk, c1 = rank_c1(e)
    print(f"rank={rk} c1={c1}" if cfg.pretty else json.dumps({"rank": rk, "c1": c1}))
    return EXIT_OK


async def cmd_kappa(args: argparse.Namespace, cfg: CliConfig) -> int:
    if cfg.n is None:
        raise UsageError("kappa needs --n")
    m = kappa(cfg.n).matrix(BasisTag(args.basis))
    _emit(cfg, MatrixPayload.of(m), render_matrix(m.entries))
    return EXIT_OK


async def cmd_isom_check(args: argparse.Namespace, cfg: CliConfig) -> int:
    (doc,) = _documents(args, cfg, 1)
    payload = isometry_input_adapter.validate_python(doc)
    if isinstance(payload, DescriptorPayload):
        d = payload.to_descriptor(cfg.n)
    else:
        d = await asyncio.to_thread(classify_isometry, payload.to_operator())
    lattice = is_lattice_isometry(d)
    reason = None if lattice else isometry_obstruction(d)
    report = IsometryReport(
        lattice=lattice,
        reason=reason,
        classification=DescriptorPayload.of(d),
        tensor_class=ClassPayload.of(operator_class(d.series())),
    )
    pretty = f"{render_descriptor(d)}: {'lattice isometry' if lattice else 'not a lattice isometry'}"
    if reason:
        pretty += f" ({reason})"
    _emit(cfg, report, pretty)
    return EXIT_OK if lattice else EXIT_NEGATIVE


async def cmd_generators(args: argparse.Namespace, cfg: CliConfig) -> int:
    if cfg.n is None:
        raise UsageError("generators needs --n")
    gs = await asyncio.to_thread(compute_generators, cfg.n, cfg.budget)
    _emit(cfg, GeneratorSetPayload.of(gs), render_generator_set(gs))
    return EXIT_OK


async def cmd_mutate(args: argparse.Namespace, cfg: CliConfig) -> int:
    if args.tuple is not None:
        t = TuplePayload.model_validate_json(args.tuple).to_tuple()
    elif cfg.input is not None:
        t = TuplePayload.model_validate(_read_input(cfg)).to_tuple()
    elif cfg.n is not None:
        t = standard_tuple(cfg.n, 0)
    else:
        raise UsageError("mutate needs --tuple, --input or --n")
    word = parse_word(args.word, t.n)
    out = apply_word(t, word)
    _emit(cfg, MutationReport.of(out, format_word(word)), render_tuple(out))
    return EXIT_OK


async def cmd_repl(args: argparse.Namespace, cfg: CliConfig) -> int:
    if cfg.n is None:
        raise UsageError("repl needs --n")
    session = MutationSession(cfg.n, cfg.budget)
    print(f"mutation session on P^{cfg.n}, type 'help' for commands")
    print(render_tuple(session.current))
    while True:
        try:
            line = await asyncio.to_thread(input, "k0> ")
        except EOFError:
            print()
            return EXIT_OK
        try:
            out = session.handle(line)
        except QuitSession:
            return EXIT_OK
        if out:
            print(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k0lattice", description="K0 of projective space: Euler form, isometries, mutations")
    p.add_argument("--format", choices=["json", "pretty"], default="json", help="Output format (default json)")
    p.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    # same options after the subcommand, without clobbering the global values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "pretty"], default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gram", parents=[common], help="Gram matrix of the Euler form")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--basis", choices=BASIS_CHOICES, default=BasisTag.LINE_BUNDLE.value)
    s.set_defaults(func=cmd_gram)

    for name, count, func, text in (
        ("chi", 2, cmd_chi, "Euler pairing chi(E, F)"),
        ("convert", 1, cmd_convert, "Re-express a class in another basis"),
        ("tensor", 2, cmd_tensor, "Tensor product of two classes"),
        ("rank", 1, cmd_rank, "Rank and c1 of a lattice class"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("items", nargs="*", metavar="CLASS_JSON", help=f"{count} class JSON document(s)")
        s.add_argument("--input", help="JSON file, or - for stdin")
        if name == "convert":
            s.add_argument("--basis", choices=BASIS_CHOICES, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("kappa", parents=[common], help="Matrix of the canonical operator")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--basis", choices=BASIS_CHOICES, default=BasisTag.STRUCTURE_SHEAF.value)
    s.set_defaults(func=cmd_kappa)

    s = sub.add_parser("isom-check", parents=[common], help="Is a descriptor or matrix a lattice isometry?")
    s.add_argument("items", nargs="*", metavar="JSON", help="Descriptor or operator JSON")
    s.add_argument("--input", help="JSON file, or - for stdin")
    s.add_argument("--n", type=int, help="n for descriptors that do not carry it")
    s.set_defaults(func=cmd_isom_check)

    s = sub.add_parser("generators", parents=[common], help="Generators of the identity-component lattice isometries")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help=f"Candidate evaluations (default {DEFAULT_BUDGET})")
    s.set_defaults(func=cmd_generators)

    s = sub.add_parser("mutate", parents=[common], help="Apply a mutation word such as \"g0 g1' g0\"")
    s.add_argument("word", help="Space separated steps; g<i>' is the inverse")
    s.add_argument("--tuple", help="Tuple JSON (default: the standard tuple for --n)")
    s.add_argument("--input", help="Tuple JSON file, or - for stdin")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("repl", parents=[common], help="Interactive mutation session")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_repl)

    return p


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = CliConfig.from_args(args)
        return asyncio.run(args.func(args, cfg))
    except BudgetExceeded as e:
        print(dump(PartialTable(table=e.partial)))
        return _fail(EXIT_BUDGET, str(e))
    except (ValidationError, json.JSONDecodeError, MalformedWord, UsageError, OSError) as e:
        return _fail(EXIT_USAGE, str(e))
    except K0Error as e:
        log.debug("semantic error", exc_info=True)
        return _fail(EXIT_SEMANTIC, str(e))
    except ValueError as e:
        return _fail(EXIT_USAGE, str(e))


if __name__ == "__main__":
    raise SystemExit(main())
