"""``cayley-wreath`` command line.

Exit codes: 0 success, 2 parse or config error, 3 validation counterexample,
4 construction bug (a multiplier with no image or several), 5 word not in
the normal-form language, 6 unknown generator.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import automata as fa
from .audit import AuditFailure, run_all
from .base import ValidationFailure, relation_shift_bound, validate_structure
from .formats import (ConfigError, ProjectConfig, base_structure_for, load_structure,
                      save_structure)
from .groups import GroupSpecError, UnknownGenerator, eval_word, format_element
from .word_problem import ConstructionBug, solve
from .wreath import NotInLanguage, build_wreath_structure, format_word, parse_word

EXIT_CONFIG, EXIT_VALIDATION, EXIT_BUG, EXIT_NOT_IN_LANGUAGE, EXIT_UNKNOWN = 2, 3, 4, 5, 6


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like A:B, got {text!r}") from None
    if not lo <= 0 <= hi:
        raise argparse.ArgumentTypeError("window must contain 0")
    return lo, hi


def _structure(args):
    if args.structure:
        try:
            return load_structure(args.structure)
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise ConfigError(f"cannot load structure {args.structure}: {exc}") from exc
    if args.config:
        cfg = ProjectConfig.load(args.config)
        group, hspec = cfg.load_groups()
        return build_wreath_structure(base_structure_for(group), hspec)
    raise ConfigError("give --structure or --config")


def build_report(ws, quasigeodesic) -> dict:
    return {
        "group": f"{ws.hspec.name} with m = {ws.m}",
        "language_states": ws.language.n_states,
        "multipliers": {name: {"states": r.n_states, "shift_bound": relation_shift_bound(r)}
                        for name, r in ws.multipliers.items()},
        "shifts": [{"q": q, "generator": g, "k": e.k, "r": e.r, "shift": e.shift}
                   for (q, g), e in sorted(ws.shifts.items())],
        "base_quasigeodesic": str(quasigeodesic.lam),
        "base_audit_depth": quasigeodesic.audit_depth,
    }


def report_text(report: dict) -> str:
    lines = [report["group"], f"L: {report['language_states']} states",
             f"{len(report['multipliers'])} multipliers"]
    for name, info in report["multipliers"].items():
        lines.append(f"  R_{name}: {info['states']} states, shift bound {info['shift_bound']}")
    lines.append("shift table (x_q * a = t^k x_r, C* offset):")
    for e in report["shifts"]:
        lines.append(f"  x{e['q']} * {e['generator']} = t^{e['k']} x{e['r']}, offset {e['shift']}")
    lines.append(f"base quasigeodesic constant {report['base_quasigeodesic']} "
                 f"(ball radius {report['base_audit_depth']})")
    return "\n".join(lines)


def cmd_build(args) -> int:
    if not args.config:
        raise ConfigError("build needs --config")
    cfg = ProjectConfig.load(args.config)
    group, hspec = cfg.load_groups()
    base = base_structure_for(group)
    base_report = validate_structure(base, min(cfg.multiplier_depth, 6))
    ws = build_wreath_structure(base, hspec)
    out = Path(args.structure) if args.structure else cfg.output_dir / "structure.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_structure(ws, out)
    report = build_report(ws, base_report.quasigeodesic)
    text = report_text(report)
    out.with_suffix(".report.txt").write_text(text + "\n")
    out.with_suffix(".report.json").write_text(json.dumps(report, indent=2) + "\n")
    print(text)
    print(f"wrote {out}")
    return 0


def cmd_nf(args) -> int:
    ws = _structure(args)
    v = eval_word(ws.hspec, ws.base.group, args.word.split())
    print(format_word(ws.encode(v)))
    return 0


def cmd_mul(args) -> int:
    ws = _structure(args)
    u = parse_word(args.normal_form)
    ws.decode(u)  # raises NotInLanguage with a reason
    print(format_word(ws.multiply(u, args.generator)))
    return 0


def cmd_wp(args) -> int:
    ws = _structure(args)
    trace = solve(ws, args.word.split())
    print(trace.verdict(ws))
    print(format_word(trace.final))
    return 0


def cmd_enum(args) -> int:
    ws = _structure(args)
    for w in fa.enumerate_words(ws.language, args.depth):
        print(f"{format_word(w)}\t{format_element(ws.decode(w), ws.base.group)}")
    return 0


def cmd_verify(args) -> int:
    ws = _structure(args)
    cfg = ProjectConfig.load(args.config) if args.config else ProjectConfig(Path(), Path())
    language_depth = args.depth or cfg.language_depth
    multiplier_depth = max(1, args.depth - 2) if args.depth else cfg.multiplier_depth
    seed = cfg.seed if args.seed is None else args.seed
    log = run_all(ws, language_depth=language_depth, multiplier_depth=multiplier_depth,
                  window=args.window or cfg.window, seed=seed)
    print("\n".join(log.lines))
    print("ok")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cayley-wreath",
                                description="Cayley automatic structures for G wr H.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", help="project config JSON")
        sp.add_argument("--structure", help="structure JSON (output path for build)")
        sp.set_defaults(func=func)
        return sp

    add("build", cmd_build, "build and save a structure")
    add("nf", cmd_nf, "normal form of a generator word").add_argument("word")
    sp = add("mul", cmd_mul, "multiply a normal form by a generator")
    sp.add_argument("normal_form")
    sp.add_argument("generator")
    add("wp", cmd_wp, "solve the word problem").add_argument("word")
    add("enum", cmd_enum, "list normal forms").add_argument("--depth", type=int, default=6)
    sp = add("verify", cmd_verify, "run the oracle audit suite")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--window", type=_window, default=None)
    sp.add_argument("--seed", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "depth", None) is not None and args.depth < 1:
        print("error: --depth must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GroupSpecError, ValidationFailure) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AuditFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        print(f"counterexample: {exc.counterexample!r}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConstructionBug, fa.NoImage, fa.NotFunctional) as exc:
        print(f"construction bug: {exc}", file=sys.stderr)
        return EXIT_BUG
    except NotInLanguage as exc:
        print(f"not a normal form: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_LANGUAGE
    except UnknownGenerator as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
