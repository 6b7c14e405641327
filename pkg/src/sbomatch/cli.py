"""Command-line front end: gen, solve, reduce, check, bench.

Exit codes: 0 success, 2 validation or usage error, 3 size-bound exceeded,
4 check failed. All randomness flows from --seed; outputs are byte-stable
for fixed inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import instances, sbo, solvers
from .errors import ParseError, SizeLimitError, ValidationError
from .matroids import check_matroid_axioms
from .sbo import check_sbo, clique_matroid

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SIZE = 3
EXIT_CHECK_FAILED = 4


@dataclass
class RunConfig:
    command: str
    paths: tuple[str, ...] = ()
    algorithm: str | None = None
    s: int | None = None
    eps: Fraction | None = None
    weighted: bool = True
    allow_general_weights: bool = False
    seed: int = 0
    output: str | None = None
    fmt: str = "text"
    max_pairs: int | None = None
    max_ground: int | None = None
    max_rank: int | None = None

    def check(self) -> None:
        if self.algorithm in ("local1", "local2"):
            if self.s is None or self.eps is not None:
                raise ValidationError(f"--alg {self.algorithm} requires --s and no --eps")
        elif self.algorithm == "ptas":
            if self.eps is None or self.s is not None:
                raise ValidationError("--alg ptas requires --eps and no --s")
            if not 0 < self.eps < 1:
                raise ValidationError("--eps must lie strictly between 0 and 1")
        elif self.algorithm in ("greedy", "exact"):
            if self.s is not None or self.eps is not None:
                raise ValidationError(f"--alg {self.algorithm} takes neither --s nor --eps")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    return instances.parse(text)


def _parse_edge_flag(text: str) -> tuple[tuple[int, int], ...]:
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        ends = tok.split("-")
        if len(ends) != 2:
            raise ValidationError(f"malformed edge token {tok!r}")
        out.append((int(ends[0]), int(ends[1])))
    return tuple(out)


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "clique":
        if args.nu is None or args.pairs is None:
            raise ValidationError("gen --kind clique requires --nu and --pairs")
        _, inst = clique_matroid(args.nu, args.pairs, _parse_edge_flag(args.edges))
    else:
        if args.n is None:
            raise ValidationError("gen requires --n for random kinds")
        inst = instances.gen_random(
            args.kind, args.n, args.seed, (args.weight_range[0], args.weight_range[1])
        )
    _emit(instances.serialize(inst), args.output)
    return EXIT_OK


def _solution_rows(sol: solvers.Solution) -> list[tuple[str, str]]:
    return [
        ("chosen", " ".join(str(i) for i in sorted(sol.pair_indices))),
        ("weight", str(sol.weight)),
        ("iterations", str(sol.iterations)),
        ("oracle_calls", str(sol.oracle_calls)),
    ]


def _format_report(rows: list[tuple[str, str]], fmt: str) -> str:
    if fmt == "json":
        doc = {}
        for key, value in rows:
            if key == "chosen":
                doc[key] = [int(t) for t in value.split()] if value else []
            elif key in ("iterations", "oracle_calls"):
                doc[key] = int(value)
            else:
                doc[key] = value
        return json.dumps(doc) + "\n"
    return "".join(f"{k}: {v}\n" for k, v in rows)


def _cmd_solve(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        command="solve",
        paths=(args.path,),
        algorithm=args.alg,
        s=args.s,
        eps=Fraction(args.eps) if args.eps is not None else None,
        weighted=not args.unweighted,
        allow_general_weights=args.general_weights,
        output=args.output,
        fmt=args.format,
        max_pairs=args.max_pairs,
    )
    cfg.check()
    inst = _load(args.path)
    kwargs = dict(
        s=cfg.s,
        eps=cfg.eps,
        weighted=cfg.weighted,
        allow_general_weights=cfg.allow_general_weights,
        max_pairs=cfg.max_pairs,
    )
    if isinstance(inst, instances.MatchingInstance):
        sol = solvers.solve_matching(inst, cfg.algorithm, **kwargs)
    else:
        sol = solvers.solve_parity(inst, cfg.algorithm, **kwargs)
    _emit(_format_report(_solution_rows(sol), cfg.fmt), cfg.output)
    return EXIT_OK


def _cmd_reduce(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    if not isinstance(inst, instances.MatchingInstance):
        raise ValidationError("reduce expects a matching instance")
    reduced, rmap = instances.matching_to_parity(inst)
    _emit(instances.serialize(reduced), args.output)
    if args.map_out is not None:
        doc = {
            "pair_to_edge": list(rmap.pair_to_edge),
            "copy_to_vertex": list(rmap.copy_to_vertex),
        }
        Path(args.map_out).write_text(json.dumps(doc) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    inst = _load(args.path)
    rows: list[tuple[str, str]] = [("check", args.kind)]
    ok = True
    if args.kind == "axioms":
        violation = check_matroid_axioms(
            inst.matroid, max_ground=args.max_ground or 14
        )
        ok = violation is None
        rows.append(("result", "pass" if ok else "fail"))
        if violation is not None:
            rows.append(("axiom", violation.axiom))
            for idx, wit in enumerate(violation.witness):
                rows.append((f"witness_{idx}", " ".join(str(e) for e in sorted(wit))))
    elif args.kind == "sbo":
        counter = check_sbo(
            inst.matroid,
            max_rank=args.max_rank or 6,
            max_ground=args.max_ground or 18,
        )
        ok = counter is None
        rows.append(("result", "pass" if ok else "fail"))
        if counter is not None:
            rows.append(("base_i", " ".join(str(e) for e in sorted(counter.base_i))))
            rows.append(("base_j", " ".join(str(e) for e in sorted(counter.base_j))))
    elif args.kind == "reduction":
        if not isinstance(inst, instances.MatchingInstance):
            raise ValidationError("check reduction expects a matching instance")
        direct_w, _ = solvers.brute_force_matching_opt(inst)
        reduced, rmap = instances.matching_to_parity(inst)
        sol = solvers.brute_force_opt(reduced)
        pulled = rmap.edges_for_pairs(sol.pair_indices)
        ok = direct_w == sol.weight and solvers.is_feasible_matching(inst, pulled)
        rows.append(("result", "pass" if ok else "fail"))
        rows.append(("matching_opt", str(direct_w)))
        rows.append(("parity_opt", str(sol.weight)))
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown check kind {args.kind!r}")
    _emit(_format_report(rows, args.format), args.output)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _parse_alg_token(token: str) -> tuple[str, dict]:
    parts = token.split(":")
    name = parts[0]
    if name in ("greedy", "exact"):
        if len(parts) != 1:
            raise ValidationError(f"algorithm {name} takes no parameter: {token!r}")
        return name, {}
    if name in ("local1", "local2"):
        if len(parts) != 2:
            raise ValidationError(f"algorithm token {token!r} needs a move size, e.g. {name}:3")
        return name, {"s": int(parts[1])}
    if name == "ptas":
        if len(parts) not in (2, 3):
            raise ValidationError(f"algorithm token {token!r} needs an eps, e.g. ptas:1/2")
        weighted = True
        if len(parts) == 3:
            if parts[2] not in ("w", "u"):
                raise ValidationError(f"ptas mode must be 'w' or 'u': {token!r}")
            weighted = parts[2] == "w"
        return name, {"eps": Fraction(parts[1]), "weighted": weighted}
    raise ValidationError(f"unknown algorithm {name!r}")


def _cmd_bench(args: argparse.Namespace) -> int:
    kinds = [k for k in args.kinds.split(",") if k] if args.kinds else []
    algs = [t for t in args.algs.split(",") if t] if args.algs else []
    parsed = [(tok, *_parse_alg_token(tok)) for tok in algs]
    header = ["kind", "n", "seed", "alg", "weight", "ratio", "iterations", "oracle_calls"]
    table: list[list[str]] = []
    for kind in kinds:
        for seed in range(args.seeds):
            inst = instances.gen_random(
                kind, args.n, seed, (args.weight_range[0], args.weight_range[1])
            )
            exact_w: Fraction | None = None
            results = []
            for token, name, kwargs in parsed:
                sol = solvers.solve_parity(
                    inst, name, allow_general_weights=True, **kwargs
                )
                if name == "exact":
                    exact_w = sol.weight
                results.append((token, sol))
            for token, sol in results:
                if exact_w is None or exact_w == 0:
                    ratio = "-"
                else:
                    ratio = str(sol.weight / exact_w)
                table.append(
                    [
                        kind,
                        str(args.n),
                        str(seed),
                        token,
                        str(sol.weight),
                        ratio,
                        str(sol.iterations),
                        str(sol.oracle_calls),
                    ]
                )
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(table)
        text = buf.getvalue()
    else:
        widths = [
            max(len(header[c]), *(len(row[c]) for row in table), 0) if table else len(header[c])
            for c in range(len(header))
        ]
        fmt_row = lambda row: "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        text = "\n".join([fmt_row(header)] + [fmt_row(r) for r in table]) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbomatch",
        description="Matroid parity and matroid matching: generators, solvers, checkers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--kind", required=True, choices=instances.GENERATOR_KINDS + ("clique",))
    gen.add_argument("--n", type=int, help="number of pairs (random kinds)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weight-range", type=int, nargs=2, default=(1, 100), metavar=("LO", "HI"))
    gen.add_argument("--nu", type=int, help="feasible matching size (clique kind)")
    gen.add_argument("--pairs", type=int, help="number of pairs (clique kind)")
    gen.add_argument("--edges", default="", help="pair-index graph edges, e.g. 0-1,1-2")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("path")
    solve.add_argument("--alg", required=True, choices=solvers.ALGORITHMS)
    solve.add_argument("--s", type=int)
    solve.add_argument("--eps")
    solve.add_argument("--unweighted", action="store_true", help="ptas: unit-weight mode")
    solve.add_argument(
        "--general-weights",
        action="store_true",
        help="allow local1 on non-unit weights (no iteration bound)",
    )
    solve.add_argument("--max-pairs", type=int)
    solve.add_argument("--format", choices=("text", "json"), default="text")
    solve.add_argument("-o", "--output")
    solve.set_defaults(func=_cmd_solve)

    red = sub.add_parser("reduce", help="rewrite a matching instance as parity")
    red.add_argument("path")
    red.add_argument("--map-out", help="write the reduction map as JSON")
    red.add_argument("-o", "--output")
    red.set_defaults(func=_cmd_reduce)

    chk = sub.add_parser("check", help="run a verification oracle")
    chk.add_argument("--kind", required=True, choices=("axioms", "sbo", "reduction"))
    chk.add_argument("path")
    chk.add_argument("--max-ground", type=int)
    chk.add_argument("--max-rank", type=int)
    chk.add_argument("--format", choices=("text", "json"), default="text")
    chk.add_argument("-o", "--output")
    chk.set_defaults(func=_cmd_check)

    bench = sub.add_parser("bench", help="run a seeded benchmark table")
    bench.add_argument("--kinds", default="", help="comma list of generator kinds")
    bench.add_argument("--n", type=int, required=True)
    bench.add_argument("--seeds", type=int, required=True, help="seeds 0..N-1")
    bench.add_argument(
        "--algs", default="", help="comma list, e.g. greedy,local2:3,ptas:1/2:w,exact"
    )
    bench.add_argument("--weight-range", type=int, nargs=2, default=(1, 100), metavar=("LO", "HI"))
    bench.add_argument("--format", choices=("text", "csv"), default="text")
    bench.add_argument("-o", "--output")
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE


if __name__ == "__main__":
    raise SystemExit(main())
