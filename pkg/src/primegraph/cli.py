"""Command-line front end.

Exit codes: 0 success or Occurring, 1 NonOccurring (``check``), 2 Unknown
(``check``), and one distinct code per error class above that.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .admissibility import audit
from .engine import (
    KMAX_CAP,
    Certificate,
    KmaxCapError,
    ReplayError,
    Replayer,
    certificate_problems,
    emit,
    implication_edges,
    layered_oracle,
)
from .families import SpecError, format_graph_file, generate, parse_graph_file, parse_spec, recognize
from .graph import GraphError, parse_label, to_dot
from .kb import EXTERNAL_AXIOM, ContradictionError, KBEntry, KBError, KnowledgeBase, Status, seeded_kb
from .rules import DEFAULT_ORDER, DiameterBoundParams, Prover
from .sweep import DEFAULT_EDGE_CAP, MODES, SweepCapError, default_jobs, vertex_set_sweep

EXIT_OK = 0
EXIT_NON_OCCURRING = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3
EXIT_PARSE = 4
EXIT_KB = 5
EXIT_CAP = 6
EXIT_REPLAY = 7
EXIT_INVALID = 8
EXIT_CONTRADICTION = 9
EXIT_IO = 10

VERDICT_EXIT = {Status.OCCURRING: EXIT_OK, Status.NON_OCCURRING: EXIT_NON_OCCURRING, Status.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _rule_order(text: str) -> tuple[str, ...]:
    order = tuple(x.strip() for x in text.split(",") if x.strip())
    if sorted(order) != sorted(DEFAULT_ORDER):
        raise argparse.ArgumentTypeError(f"rule order must be a permutation of {','.join(DEFAULT_ORDER)}")
    return order


def _diameter(text: str) -> DiameterBoundParams:
    try:
        return DiameterBoundParams.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kb", type=Path, help="knowledge base file (default: freshly seeded)")
    common.add_argument("--out", type=Path, help="write the main output here instead of stdout")
    common.add_argument("--rule-order", type=_rule_order, default=DEFAULT_ORDER,
                        help=f"comma-separated prover order (default {','.join(DEFAULT_ORDER)})")
    common.add_argument("--diam-bound", type=_diameter, default=DiameterBoundParams(),
                        help="diameter rule as selector[:shift[:offset]], e.g. all:1:0 or exists:0:-1")
    common.add_argument("--edge-cap", type=_positive, default=DEFAULT_EDGE_CAP, help="sweep enumeration edge cap")
    common.add_argument("--jobs", type=_positive, default=default_jobs(), help="parallel sweep workers")
    common.add_argument("--figure", type=Path, help="render a figure to this file (png, pdf or svg)")

    p = _Parser(prog="primegraph", description="Character degree graph toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate a family member")
    g.add_argument("spec")
    g.add_argument("--format", choices=("text", "dot"), default="text")

    c = sub.add_parser("check", parents=[common], help="run the prover on a spec or graph file")
    c.add_argument("target", help="family spec such as sigmaR:3,1, or a graph file path")

    a = sub.add_parser("audit", parents=[common], help="admissibility audit of one vertex")
    a.add_argument("spec")
    a.add_argument("vertex")
    a.add_argument("--level", choices=("strong", "admissible"), default="strong")
    a.add_argument("--degree-cap", type=_positive, default=20)

    r = sub.add_parser("replay", parents=[common], help="replay the induction up to --kmax")
    r.add_argument("--kmax", type=int, default=3)
    r.add_argument("--kmax-cap", type=_positive, default=KMAX_CAP, help="refuse replays deeper than this")
    r.add_argument("--kb-out", type=Path, help="save the updated knowledge base")
    r.add_argument("--format", choices=("text", "json", "dot"), default="text")
    r.add_argument("--sweep-mode", choices=MODES, default="auto")

    o = sub.add_parser("oracle", parents=[common], help="exhaustive vertex-set sweep")
    o.add_argument("spec", nargs="?")
    o.add_argument("vertex", nargs="?")
    o.add_argument("--layered", type=int, metavar="K", help="run the layered oracle for one k instead")
    o.add_argument("--sweep-mode", choices=MODES, default="exhaustive")
    o.add_argument("--kb-out", type=Path, help="save the knowledge base including new sweep entries")

    k = sub.add_parser("kb", parents=[common], help="knowledge base maintenance")
    k.add_argument("action", choices=("list", "add-axiom", "validate", "check-cert"))
    k.add_argument("args", nargs="*", help="add-axiom: SPEC STATUS TEXT; check-cert: CERT.json")
    return p


def _load_kb(args) -> KnowledgeBase:
    if args.kb is None:
        return seeded_kb()
    if not args.kb.exists():
        raise KBError(f"knowledge base {args.kb} not found")
    return KnowledgeBase.load(args.kb)


def _write(args, text: str | bytes) -> None:
    data = text.encode() if isinstance(text, str) else text
    if args.out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_bytes(data)


def _prover(args, kb: KnowledgeBase) -> Prover:
    return Prover(kb, args.rule_order, args.diam_bound)


def cmd_gen(args) -> int:
    spec = parse_spec(args.spec)
    g = generate(spec)
    _write(args, format_graph_file(g) if args.format == "text" else to_dot(g, spec.notation()))
    if args.figure:
        from .plotting import draw_graph  # matplotlib loads only when a figure is asked for
        draw_graph(g, args.figure, spec.notation())
    return EXIT_OK


def cmd_check(args) -> int:
    kb = _load_kb(args)
    path = Path(args.target)
    if path.is_file():
        g = parse_graph_file(path.read_text(encoding="utf-8"))
        name = recognize(g)
        name = name.notation() if name else path.name
    else:
        spec = parse_spec(args.target)
        g, name = generate(spec), spec.notation()
    verdict = _prover(args, kb).certify(g)
    _write(args, f"{name}: {verdict.summary()}\n")
    if args.figure:
        from .plotting import draw_graph
        draw_graph(g, args.figure, f"{name}: {verdict.summary()}")
    return VERDICT_EXIT[verdict.status]


def cmd_audit(args) -> int:
    kb = _load_kb(args)
    spec = parse_spec(args.spec)
    report = audit(generate(spec), parse_label(args.vertex), _prover(args, kb), level=args.level,
                   name=spec.notation(), degree_cap=args.degree_cap)
    _write(args, report.table() + "\n")
    if args.figure:
        from .plotting import plot_audit
        plot_audit(report, args.figure)
    return EXIT_OK


def cmd_replay(args) -> int:
    if args.kmax < 1:
        raise UsageError("--kmax must be at least 1")
    kb = _load_kb(args)
    replayer = Replayer(kb, args.rule_order, args.diam_bound, args.edge_cap, args.jobs, args.sweep_mode)
    cert = replayer.theorem(args.kmax, args.kmax_cap)
    _write(args, emit(cert, args.format))
    if args.kb_out:
        kb.save(args.kb_out)
    if args.figure:
        from .plotting import plot_implications
        plot_implications(implication_edges(cert), args.figure,
                          {n: parse_spec(n).notation() for e in implication_edges(cert) for n in e})
    return EXIT_OK


def cmd_oracle(args) -> int:
    kb = _load_kb(args)
    prover = _prover(args, kb)
    if args.layered is not None:
        if args.layered < 3:
            raise UsageError("--layered needs k >= 3")
        reports = layered_oracle(args.layered, kb, prover, args.edge_cap, args.jobs, args.sweep_mode)
    elif args.spec and args.vertex:
        reports = [vertex_set_sweep(parse_spec(args.spec), parse_label(args.vertex), prover, kb,
                                    args.edge_cap, args.jobs, mode=args.sweep_mode)]
    else:
        raise UsageError("oracle needs SPEC VERTEX or --layered K")
    _write(args, "\n".join(r.text() for r in reports) + "\n")
    if args.kb_out:
        kb.save(args.kb_out)
    if args.figure:
        from .plotting import plot_sweep
        for i, r in enumerate(reports):
            target = args.figure if len(reports) == 1 else args.figure.with_stem(f"{args.figure.stem}-{i}")
            plot_sweep(r, target)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_UNKNOWN


def cmd_kb(args) -> int:
    if args.action == "list":
        kb = _load_kb(args)
        _write(args, "".join(f"{e.key}\t{e.status.value}\t{','.join(e.closure) or '-'}\n"
                             for e in kb.entries.values()))
        return EXIT_OK
    if args.action == "validate":
        kb = _load_kb(args)
        problems = kb.validate()
        _write(args, "".join(p + "\n" for p in problems) or f"ok: {len(kb)} entries\n")
        return EXIT_INVALID if problems else EXIT_OK
    if args.action == "add-axiom":
        if len(args.args) != 3:
            raise UsageError("add-axiom needs SPEC STATUS TEXT")
        spec_text, status, text = args.args
        if args.kb is None:
            raise UsageError("add-axiom needs --kb to know where to write")
        kb = KnowledgeBase.load(args.kb) if args.kb.exists() else seeded_kb()
        kb.add(KBEntry(f"spec:{parse_spec(spec_text).to_string()}", Status(status), (),
                       f"{EXTERNAL_AXIOM}: {text}"))
        kb.save(args.kb)
        _write(args, f"recorded {spec_text} as {status}\n")
        return EXIT_OK
    if len(args.args) != 1:
        raise UsageError("check-cert needs one certificate JSON file")
    kb = _load_kb(args)
    cert = Certificate.from_dict(json.loads(Path(args.args[0]).read_text(encoding="utf-8")))
    problems = certificate_problems(cert, kb)
    _write(args, "".join(p + "\n" for p in problems) or "certificate valid\n")
    return EXIT_INVALID if problems else EXIT_OK


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "audit": cmd_audit, "replay": cmd_replay,
            "oracle": cmd_oracle, "kb": cmd_kb}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        code, msg = EXIT_USAGE, str(exc)
    except (SpecError, GraphError) as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
    except ContradictionError as exc:
        code, msg = EXIT_CONTRADICTION, f"contradiction: {exc}"
    except KBError as exc:
        code, msg = EXIT_KB, f"knowledge base error: {exc}"
    except (SweepCapError, KmaxCapError) as exc:
        code, msg = EXIT_CAP, f"cap exceeded: {exc}"
    except ReplayError as exc:
        code, msg = EXIT_REPLAY, f"replay failed: {exc}"
    except (OSError, ValueError) as exc:
        code, msg = EXIT_IO, f"error: {exc}"
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
