"""``asymcoh`` command-line front end.

Exit codes: 0 ok, 1 suite failure, 2 parse or schema error, 3 unsupported
root-system type, 4 model validation failure, 5 chamber query on a class
that is not big.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from . import exactlin as el
from .abelian import AbelianModel, ExEPreset, abelian_asym_h, exe_asym_h, exe_index, hermitian_index
from .core import WALL
from .documents import (
    PRESETS,
    DocumentError,
    decimal_str,
    dumps,
    exact_vector,
    load_model,
    load_preset,
    parse_rational_list,
    validate_report,
    write_atomic,
)
from .flag import (
    FlagModel,
    UnsupportedType,
    asymptotic_index,
    build_root_system,
    chamber_signs,
    enumerate_chambers,
    flag_asym_h,
    flag_oracle,
)
from .suites import SUITES, run_suites
from .surface import (
    IllConditionedModel,
    ModelValidationError,
    NotBig,
    SurfaceModel,
    UnsupportedConeMode,
    certify,
    enumerate_zariski_chambers,
    surface_evaluation,
    zariski_chamber,
)

EXIT_SUITE, EXIT_PARSE, EXIT_TYPE, EXIT_MODEL, EXIT_NOT_BIG = 1, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _class(model, text):
    x = parse_rational_list(text)
    if len(x) != model.rank:
        raise DocumentError(f"class has {len(x)} coordinates, model rank is {model.rank}")
    return x


# --- commands -------------------------------------------------------------------


def cmd_flag(args) -> tuple[dict, int]:
    rs = build_root_system(args.type)
    report = {"command": "flag", "model": rs.label}
    if args.class_ is not None:
        model = FlagModel(rs)
        x = _class(model, args.class_)
        h = flag_asym_h(rs, x)
        idx = asymptotic_index(rs, x)
        signs = chamber_signs(rs, x)
        pairings = rs.pairings(x)
        # re-derive the nonzero entry from the product formula before emitting
        if idx is not WALL:
            expected = abs(model.self_intersection(x))
            assert h[idx] == expected and sum(h) == expected
        else:
            assert not any(h)
        report.update(
            {
                "class": list(x),
                "chamber": signs,
                "h": exact_vector(h),
                "certificates": {"index": idx, "coroot_pairings": list(pairings),
                                 "rho_pairings": list(rs.rho_pairings)},
            }
        )
        if args.oracle is not None:
            if idx is WALL:
                report["oracle"] = {"skipped": "class lies on a wall"}
            else:
                cmp = flag_oracle(rs, x, m_max=args.oracle)
                report["oracle"] = {
                    "m_max": cmp.m_max,
                    "index": cmp.index,
                    "exact": cmp.exact,
                    "estimate": cmp.estimate,
                    "relative_gap": cmp.relative_gap,
                    "relative_gap_decimal": decimal_str(cmp.relative_gap),
                    "denominator_cleared_by": cmp.scale,
                }
    if args.chambers:
        report["chambers"] = [
            {"signs": c.signs, "index": c.index, "witness": list(c.witness)}
            for c in enumerate_chambers(rs)
        ]
    if args.class_ is None and not args.chambers:
        raise DocumentError("flag needs --class and/or --chambers")
    return report, 0


def _surface_model(args) -> SurfaceModel:
    model = load_preset(args.preset) if args.preset else load_model(args.data)
    if not isinstance(model, SurfaceModel):
        raise DocumentError("model document is not a surface")
    return model


def cmd_surface(args) -> tuple[dict, int]:
    model = _surface_model(args)
    report = {"command": "surface", "model": model.name}
    if args.class_ is not None:
        x = _class(model, args.class_)
        ev = surface_evaluation(model, x)
        cert = {"case": ev.case, "D_squared": model.self_intersection(x)}
        if ev.decomposition is not None:
            certify(model, ev.decomposition)
            cert.update(ev.decomposition.as_dict())
            cert["P_squared"] = model.dot(ev.decomposition.P, ev.decomposition.P)
            cert["N_squared"] = model.dot(ev.decomposition.N, ev.decomposition.N)
        report.update(
            {
                "class": list(x),
                "chamber": [ev.case, sorted(ev.decomposition.support) if ev.decomposition else []],
                "h": exact_vector(ev.h),
                "volume": ev.h[0],
                "certificates": cert,
            }
        )
        if args.zariski_chamber:
            report["zariski_chamber"] = list(zariski_chamber(model, x))
    elif args.zariski_chamber:
        raise DocumentError("--zariski-chamber needs --class")
    if args.chambers:
        report["chambers"] = [
            {"support": list(c.support), "witness": list(c.witness), "positive_part": list(c.positive_part)}
            for c in enumerate_zariski_chambers(model)
        ]
    if args.class_ is None and not args.chambers:
        raise DocumentError("surface needs --class and/or --chambers")
    return report, 0


def cmd_abelian(args) -> tuple[dict, int]:
    if args.exe is not None:
        if args.data or args.class_:
            raise DocumentError("--exe cannot be combined with --data/--class")
        x = parse_rational_list(args.exe)
        if len(x) != 3:
            raise DocumentError("--exe takes three coordinates x,y,z")
        h = exe_asym_h(*x)
        q = ExEPreset().self_intersection(x)
        return {
            "command": "abelian",
            "model": "ExE",
            "class": list(x),
            "chamber": exe_index(*x),
            "h": exact_vector(h),
            "certificates": {"index": exe_index(*x), "self_intersection": q},
        }, 0
    if not (args.data and args.class_):
        raise DocumentError("abelian needs --exe x,y,z or --data PATH --class ...")
    model = load_model(args.data)
    if not isinstance(model, AbelianModel):
        raise DocumentError("model document is not abelian")
    x = _class(model, args.class_)
    h = abelian_asym_h(model, x)
    idx = hermitian_index(model, x)
    E = model.lattice_form(x)
    pf = el.pfaffian(E)
    return {
        "command": "abelian",
        "model": model.name,
        "class": list(x),
        "chamber": idx,
        "h": exact_vector(h),
        "certificates": {"index": idx, "pfaffian": pf, "lattice_form": E,
                         "signature": el.signature(model.real_form(x)).as_tuple()},
    }, 0


def _check_model(args):
    given = [a for a in (args.type, args.data, args.preset, args.exe) if a]
    if len(given) != 1:
        raise DocumentError("check needs exactly one of --type, --data, --preset, --exe")
    if args.type:
        return FlagModel(build_root_system(args.type))
    if args.exe:
        return ExEPreset()
    return load_preset(args.preset) if args.preset else load_model(args.data)


def cmd_check(args) -> tuple[dict, int]:
    model = _check_model(args)
    seed = args.seed
    env = os.environ.get("ASYMCOH_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise DocumentError(f"ASYMCOH_SEED must be an integer, got {env!r}") from None
    results = run_suites(model, args.suite, seed, args.samples)
    passed = all(r["passed"] for r in results.values())
    report = {
        "command": "check",
        "model": model.name,
        "seed": seed,
        "samples": args.samples,
        "suites": results,
        "passed": passed,
    }
    if "lipschitz" in results:
        report["lipschitz_constant"] = results["lipschitz"]["constant"]
    return report, 0 if passed else EXIT_SUITE


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="asymcoh", description="Asymptotic cohomological functions on explicit models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("flag", help="flag varieties G/B")
    f.add_argument("--type", required=True, help="root system token, e.g. A2 or G2")
    f.add_argument("--class", dest="class_", help="weight in fundamental-weight coordinates, e.g. 1,-1/2")
    f.add_argument("--chambers", action="store_true", help="list all chambers")
    f.add_argument("--oracle", type=int, metavar="M", help="compare with Borel-Weil-Bott up to m = M")

    s = sub.add_parser("surface", help="surfaces via Zariski decomposition")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="surface model document")
    src.add_argument("--preset", choices=[q for q in PRESETS if q != "elliptic"])
    s.add_argument("--class", dest="class_", help="class in the model basis, e.g. 3,1")
    s.add_argument("--chambers", action="store_true", help="enumerate Zariski chambers")
    s.add_argument("--zariski-chamber", action="store_true", help="support of the negative part of a big class")

    a = sub.add_parser("abelian", help="abelian varieties")
    a.add_argument("--exe", metavar="x,y,z", help="E x E in the basis e1, e2, delta")
    a.add_argument("--data", help="abelian model document")
    a.add_argument("--class", dest="class_", help="coefficients of the basis forms")

    c = sub.add_parser("check", help="run property suites")
    c.add_argument("--type", help="flag variety of this root system")
    c.add_argument("--data", help="surface or abelian model document")
    c.add_argument("--preset", choices=PRESETS)
    c.add_argument("--exe", action="store_true", help="the E x E closed-form model")
    c.add_argument("--suite", choices=SUITES + ("all",), default="all")
    c.add_argument("--seed", type=int, default=0, help="sampling seed; ASYMCOH_SEED overrides it")
    c.add_argument("--samples", type=int, default=200, help="sample size per suite")

    for q in (f, s, a, c):
        q.add_argument("--out", help="write the report here (atomically) instead of stdout")
    return p


COMMANDS = {"flag": cmd_flag, "surface": cmd_surface, "abelian": cmd_abelian, "check": cmd_check}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else 0
    try:
        report, code = COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"asymcoh: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedType as exc:
        print(f"asymcoh: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except (ModelValidationError, IllConditionedModel, UnsupportedConeMode) as exc:
        print(f"asymcoh: invalid model: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except NotBig as exc:
        print(f"asymcoh: not big: {exc}", file=sys.stderr)
        return EXIT_NOT_BIG
    text = dumps(report)
    validate_report(json.loads(text))
    if code == EXIT_SUITE:
        for name, r in report["suites"].items():
            if not r["passed"]:
                print(f"asymcoh: suite {name} failed; witness: {dumps(r.get('witness'))}", file=sys.stderr)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
