"""Command-line entry point: ``kunneth <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import charts
from .errors import (CollapseHypothesisFailed, KunnethError, TruncationExceeded,
                     UnsupportedIdealShape)

EXIT_OK, EXIT_ERROR, EXIT_COLLAPSE, EXIT_IDEAL, EXIT_TRUNCATION = 0, 1, 3, 4, 5
ENV_TRUNCATION = "KUNNETH_TRUNCATION"


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    ring: str | None
    prime: int
    truncation: int | None
    fmt: str
    output: str | None
    ascii_safe: bool = False


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.subcommand, getattr(args, "ring", None), getattr(args, "prime", 2),
                    _truncation(args), getattr(args, "format", "json"), getattr(args, "output", None),
                    getattr(args, "ascii_safe", False))
    if cfg.truncation is not None and cfg.truncation < 4:
        raise KunnethError(f"truncation must be at least 4, got {cfg.truncation}")
    return cfg


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, CollapseHypothesisFailed):
        return EXIT_COLLAPSE
    if isinstance(exc, UnsupportedIdealShape):
        return EXIT_IDEAL
    if isinstance(exc, TruncationExceeded):
        return EXIT_TRUNCATION
    return EXIT_ERROR


def _truncation(args) -> int | None:
    if getattr(args, "max_degree", None) is not None:
        return args.max_degree
    env = os.environ.get(ENV_TRUNCATION)
    if env:
        try:
            return int(env)
        except ValueError:
            raise KunnethError(f"{ENV_TRUNCATION}={env!r} is not an integer") from None
    return None


def _descriptor(args):
    from .descriptors import load_descriptor
    return load_descriptor(args.ring, args.prime, _truncation(args))


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


# -- subcommands --------------------------------------------------------------

def cmd_tor(args) -> int:
    from .pipeline import compute_smash_homotopy
    desc = _descriptor(args)
    table = compute_smash_homotopy(desc)
    if args.format == "json":
        _emit(_dump({"kind": "tor", "descriptor": desc.to_dict(), "truncation": table.truncation,
                     "table": table.to_dict(), "notes": list(desc.notes)}), args)
        return EXIT_OK
    doc = charts.render_chart(table, None, args.ascii_safe)
    _emit(charts.to_svg(doc) if args.format == "svg" else charts.to_ascii(doc), args)
    return EXIT_OK


def _detection_override(spec: str | None, desc) -> dict | None:
    if not spec:
        return None
    out = {}
    for item in spec.split(","):
        entry, _, choice = item.partition("=")
        entry, choice = entry.strip(), choice.strip() or "plain"
        if entry not in desc.sequence:
            raise KunnethError(f"--detect: {entry!r} is not in the sequence {list(desc.sequence)}")
        if choice not in ("plain", "conjugate"):
            raise KunnethError(f"--detect: choice must be plain or conjugate, got {choice!r}")
        out[entry] = choice
    return out


def cmd_dl_action(args) -> int:
    from .pipeline import compute_dl_action, compute_smash_homotopy
    desc = _descriptor(args)
    smash = compute_smash_homotopy(desc)
    table = compute_dl_action(desc, smash=smash, detection=_detection_override(args.detect, desc))
    if args.format == "json":
        _emit(_dump({"kind": "dl-action", "descriptor": desc.to_dict(), "truncation": table.truncation,
                     "table": table.to_dict()}), args)
        return EXIT_OK
    doc = charts.render_chart(smash, table, args.ascii_safe)
    if args.format == "svg":
        _emit(charts.to_svg(doc), args)
    else:
        text = charts.to_ascii(doc)
        text += "".join(f"note: {n}\n" for n in table.notes)
        _emit(text, args)
    return EXIT_OK


def cmd_realizable(args) -> int:
    from .pipeline import check_realizability
    report = check_realizability(args.ideal, args.prime, args.xfamily_infinite)
    if args.format == "json":
        _emit(_dump({"kind": "obstruction", **report.to_dict()}), args)
    else:
        lines = [f"verdict: {report.verdict}"]
        if report.witness:
            lines.append("witness: ({}, {}, {})".format(*report.witness))
        if report.narrative:
            lines.append(report.narrative)
        _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_difference_classes(args) -> int:
    from .pipeline import difference_class_catalog
    desc = _descriptor(args)
    cat = difference_class_catalog(desc)
    if args.format == "json":
        _emit(_dump({"kind": "difference-classes", "descriptor": desc.to_dict(),
                     "truncation": desc.truncation, "classes": cat}), args)
    else:
        key = "class" if args.ascii_safe else "display"
        _emit("".join(f"{e} -> {c[key]} @ {c['total_degree']}\n" for e, c in cat.items()), args)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    from .steenrod import DualSteenrod, conjugate_compositions, conjugate_recursive, xi_degree
    deg = xi_degree(args.xi, args.prime)
    limit = _truncation(args)
    if limit is not None and deg > limit:
        raise TruncationExceeded(f"xi{args.xi} has degree {deg} > truncation {limit}")
    if args.method == "compositions":
        value = conjugate_compositions(args.xi, args.prime)
    else:
        value = conjugate_recursive(DualSteenrod(args.prime, deg).xi(args.xi))
    if args.format == "json":
        _emit(_dump({"kind": "conjugate", "prime": args.prime, "xi": args.xi, "degree": deg,
                     "method": args.method, "value": str(value)}), args)
    else:
        _emit(f"chi(xi{args.xi}) = {value}\n", args)
    return EXIT_OK


def cmd_lift(args) -> int:
    from .comparison import (lift_map, lift_to_dict, module_map_from_dict,
                             resolution_from_dict, verify_chain_map)
    F = resolution_from_dict(args.source)
    G = resolution_from_dict(args.target)
    phi = module_map_from_dict(args.map, F.module, G.module)
    f = lift_map(phi, F, G)
    ok, level, degree = verify_chain_map(f, F, G, phi)
    if not ok:
        raise KunnethError(f"lift fails to commute at level {level}, internal degree {degree}")
    _emit(_dump({"kind": "lift", "verified": ok, "lift": lift_to_dict(f)}), args)
    return EXIT_OK


def cmd_kernel_closure(args) -> int:
    from .pipeline import kernel_closure_obstruction
    desc = _descriptor(args)
    split = lambda s: [x.strip() for x in (s or "").split(",") if x.strip()]  # noqa: E731
    found = kernel_closure_obstruction(desc, split(args.kernel), split(args.indecomposable))
    if args.format == "json":
        _emit(_dump({"kind": "kernel-closure", "descriptor": desc.to_dict(),
                     "violations": [v.__dict__ for v in found]}), args)
    else:
        text = "".join(f"{v.operation}({v.kernel_element}b) hits {v.image}b, declared indecomposable\n"
                       for v in found)
        _emit(text or "no violations\n", args)
    return EXIT_OK


def cmd_audit(args) -> int:
    from .descriptors import BUILTIN, load_descriptor
    from .pipeline import compute_dl_action, degree_violations, flagged_formulas
    rows = []
    for name in BUILTIN:
        for p in (2, 3):
            table = compute_dl_action(load_descriptor(name, p, _truncation(args)))
            rows.append({"ring": name, "prime": p, "entries": len(table.entries),
                         "violations": [str(v) for v in degree_violations(table)]})
    flags = {str(p): flagged_formulas(p) for p in (2, 3, 5)}
    if args.format == "json":
        _emit(_dump({"kind": "audit", "tables": rows, "flagged_formulas": flags}), args)
    else:
        lines = [f"{r['ring']:>4} p={r['prime']}: {r['entries']} entries, "
                 f"{len(r['violations'])} violations" for r in rows]
        for p, fs in flags.items():
            lines += [f"flagged at p={p}: {f}" for f in fs]
        _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kunneth", description=(
        "Kunneth spectral sequence computations for HF_p smash_R HF_p "
        "and the Dyer-Lashof action on its homotopy."))
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, formats=("json", "text"), ring=True, prime_required=True):
        if ring:
            sp.add_argument("--ring", required=True,
                            help="builtin (ku, ell, BP2, MU) or a JSON/TOML descriptor path")
        sp.add_argument("--prime", type=int, required=prime_required, default=2)
        sp.add_argument("--max-degree", type=int, default=None,
                        help=f"internal-degree truncation (default ${ENV_TRUNCATION} or 24; "
                             "MU uses max-degree/2 generators, default 8)")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--ascii-safe", action="store_true", help="use 2b, v1b instead of bar glyphs")
        sp.add_argument("--output", "-o", default=None)

    sp = sub.add_parser("tor", help="Tor table of F_p over R_*")
    common(sp, ("chart", "json", "svg"))
    sp.set_defaults(func=cmd_tor)

    sp = sub.add_parser("dl-action", help="Dyer-Lashof action on the Tor classes")
    common(sp, ("json", "chart", "svg"))
    sp.add_argument("--detect", default=None,
                    help="per-entry detection choice, e.g. '2=plain,v=conjugate'")
    sp.set_defaults(func=cmd_dl_action)

    sp = sub.add_parser("realizable", help="obstruction test for MU -> MU/I")
    common(sp, ("text", "json"), ring=False)
    sp.add_argument("--ideal", required=True, help="comma separated, e.g. '2,x1'")
    sp.add_argument("--xfamily-infinite", action="store_true",
                    help="the ideal contains infinitely many x_{p^k-1}")
    sp.set_defaults(func=cmd_realizable)

    sp = sub.add_parser("difference-classes", help="sequence entries and their bar classes")
    common(sp, ("text", "json"), prime_required=False)
    sp.set_defaults(func=cmd_difference_classes)

    sp = sub.add_parser("conjugate", help="antipode of xi_i in the dual Steenrod algebra")
    common(sp, ("text", "json"), ring=False)
    sp.add_argument("--xi", type=int, required=True)
    sp.add_argument("--method", choices=("recursive", "compositions"), default="recursive")
    sp.set_defaults(func=cmd_conjugate)

    sp = sub.add_parser("lift", help="lift a module map through free resolutions")
    sp.add_argument("--source", required=True, help="resolution JSON")
    sp.add_argument("--target", required=True, help="resolution JSON")
    sp.add_argument("--map", required=True, help="module map JSON")
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("kernel-closure", help="check a kernel against the Dyer-Lashof action")
    common(sp, ("text", "json"))
    sp.add_argument("--kernel", default="", help="sequence entries in the kernel")
    sp.add_argument("--indecomposable", default="", help="entries with indecomposable image")
    sp.set_defaults(func=cmd_kernel_closure)

    sp = sub.add_parser("audit", help="degree audit of every builtin table")
    common(sp, ("text", "json"), ring=False, prime_required=False)
    sp.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config_from_args(args)
        return args.func(args)
    except KunnethError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
