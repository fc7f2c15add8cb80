"""Command-line front end: ``gaussfrac <command> [options]``.

Every command writes JSON (or NDJSON / CSV where noted) to standard output.
Exit status 0 means success (a violated condition is still a successful
verdict), 2 a usage error, 3 a computational failure reported as an error object.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Sequence

from .bigcomplex import DEFAULT_PREC, BigComplex
from .cfalgo import PREC_CAP, expand, make_algorithm
from .errors import BridgeSearchFailed, ExceededBudget, GaussFracError, PrecisionExhausted
from .gaussint import GaussianInt, format_gaussian, parse_block, parse_complex_rational, parse_gaussian, parse_gaussian_rational

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 2, 3
COMPUTE_ERRORS = (PrecisionExhausted, BridgeSearchFailed, ExceededBudget)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    prec: int = DEFAULT_PREC
    cap: int = PREC_CAP
    alg: str = "hurwitz"
    d: str = "1/2"
    r: str = "1"
    depth: int = 20
    max_steps: int | None = None
    format: str = "json"
    seed: int | None = None
    samples: int = 4096
    perturb: str = "1/1024"
    bridge_budget: int = 64

    def validate(self) -> RunConfig:
        if not 64 <= self.prec <= self.cap:
            raise UsageError(f"precision must lie in [64, {self.cap}]")
        r = Fraction(self.r)
        if not (2 * r * r >= 1 and r <= 1):
            raise UsageError("r must lie in [1/sqrt2, 1]")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        return self


def read_config(path: str) -> dict:
    """Parse a key=value file; '#' starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = (t.strip() for t in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    names = {f.name: f for f in fields(RunConfig)}
    overrides = {}
    if args.config:
        for k, v in read_config(args.config).items():
            if k not in names:
                raise UsageError(f"unknown config key {k!r}")
            overrides[k] = v
    for k in names:
        v = getattr(args, k, None)
        if v is not None:
            overrides[k] = v
    typed = {}
    for k, v in overrides.items():
        if names[k].type in ("int", "int | None") and v is not None:
            try:
                v = int(v)
            except ValueError:
                raise UsageError(f"{k} must be an integer") from None
        typed[k] = v
    return replace(cfg, **typed).validate()


# parsing helpers ---------------------------------------------------------------


def _parse_value(args, cfg: RunConfig):
    """The number to expand: --surd, --value (exact) or --approx re,im,radius."""
    given = [x for x in (args.surd, args.value, args.approx) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --surd, --value, --approx")
    if args.surd:
        from .surd import parse_surd

        return parse_surd(args.surd, args.branch)
    if args.value:
        return parse_gaussian_rational(args.value)
    parts = args.approx.split(",")
    if len(parts) != 3:
        raise UsageError("--approx needs re,im,radius")
    re_, im_, rad = (Fraction(t.strip()) for t in parts)
    return BigComplex.from_center(re_, im_, rad, cfg.prec)


def _blocks(text: str) -> list[list]:
    return [parse_block(b) for b in text.split(";") if b.strip()]


def _complex_list(text: str) -> list:
    out = []
    for t in text.split(";"):
        t = t.strip()
        if not t:
            continue
        if t in ("inf", "infinity"):
            out.append("inf")
            continue
        re_, im_ = parse_complex_rational(t)
        out.append(complex(float(re_), float(im_)))
    return out


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# commands ----------------------------------------------------------------------


def cmd_expand(args, cfg, out):
    alg = make_algorithm(cfg.alg, cfg.d, cfg.r)
    z = _parse_value(args, cfg)
    ex = expand(alg, z, cfg.depth, prec=cfg.prec, cap=cfg.cap)
    emit(out, ex.to_json(with_iterates=args.iterates))


def cmd_period(args, cfg, out):
    from .surd import detect_period, parse_surd

    if not args.surd:
        raise UsageError("period needs --surd")
    s = parse_surd(args.surd, args.branch)
    res = detect_period(s, make_algorithm(cfg.alg, cfg.d, cfg.r), cfg.max_steps)
    emit(out, {"surd": s.to_json(), **res.to_json()})


def cmd_check(args, cfg, out):
    from .conditions import check_condition

    emit(out, check_condition(parse_gaussian_seq(args.seq), args.cond).to_json())


def parse_gaussian_seq(text: str):
    return parse_block(text)


def cmd_profile(args, cfg, out):
    from .conditions import omega_theta_profile

    emit(out, omega_theta_profile(parse_gaussian_seq(args.seq), args.theta).to_json())


def cmd_admissible(args, cfg, out):
    from .conditions import admissible_empirical

    v = admissible_empirical(parse_gaussian_seq(args.block), cfg.samples, Fraction(cfg.perturb), cfg.seed)
    emit(out, v.to_json())


def cmd_generic(args, cfg, out):
    from .conditions import build_generic_prefix

    gp = build_generic_prefix(_blocks(args.blocks), cfg.bridge_budget, cfg.samples, Fraction(cfg.perturb))
    obj = gp.to_json()
    re_, im_ = gp.value().parts()
    obj["value"] = {"re": f"{float(re_):.17g}", "im": f"{float(im_):.17g}"}
    emit(out, obj)


def cmd_t72(args, cfg, out):
    from .projective import theorem72_probe

    alg = make_algorithm(cfg.alg, cfg.d, cfg.r)
    z = _parse_value(args, cfg)
    lengths = _ints(args.lengths)
    ex = expand(alg, z, max(lengths), prec=cfg.prec, cap=cfg.cap, keep_iterates=False)
    tab = theorem72_probe(z, ex.quotients, lengths, _complex_list(args.points), args.tolerance)
    emit_table(out, tab, cfg.format)


def cmd_p75(args, cfg, out):
    from .projective import prop75_probe, prop75_sequence

    alpha, beta = parse_gaussian_seq(args.alpha), parse_gaussian_seq(args.beta)
    lengths = _ints(args.lengths)
    if args.x:
        x, s = parse_gaussian_seq(args.x), _ints(args.s or "")
    else:
        x, s = prop75_sequence(alpha, beta, lengths, parse_gaussian(args.junction))
    tab = prop75_probe(x, alpha, beta, s, lengths, tolerance=args.tolerance)
    emit_table(out, tab, cfg.format)


def cmd_qform(args, cfg, out):
    from . import qform

    if args.mode == "isolation":
        emit(out, qform.isolation_probe(args.zeta1 or "golden", int(args.N)).to_json())
        return
    form = qform.BinaryForm(args.zeta1 or "golden", args.zeta2 or "0")
    if args.mode == "coverage":
        for n in _ints(args.N):
            emit(out, qform.form_coverage(form, n, float(args.radius), float(args.cell)).to_json(), ndjson=True)
        return
    # values: streamed NDJSON, one pair per line
    for bt in qform.iter_value_batches(form, _ints(args.N)[0]):
        for a, b, v, e, z in zip(bt.a, bt.b, bt.values, bt.err, bt.zero):
            rec = {
                "a": format_gaussian(GaussianInt(int(a.real), int(a.imag))),
                "b": format_gaussian(GaussianInt(int(b.real), int(b.imag))),
                "re": repr(float(v.real)),
                "im": repr(float(v.imag)),
                "err": repr(float(e)),
            }
            if cfg.format == "csv":
                out.write(",".join(rec.values()) + "\n")
            else:
                out.write(json.dumps(rec) + "\n")


COMMANDS = {
    "expand": cmd_expand,
    "period": cmd_period,
    "check": cmd_check,
    "profile": cmd_profile,
    "admissible": cmd_admissible,
    "generic": cmd_generic,
    "probe-t72": cmd_t72,
    "probe-p75": cmd_p75,
    "qform": cmd_qform,
}


def emit(out, obj, ndjson: bool = False) -> None:
    if ndjson:
        out.write(json.dumps(obj, separators=(",", ":")) + "\n")
    else:
        out.write(json.dumps(obj, indent=2) + "\n")


def emit_table(out, tab, fmt: str) -> None:
    if fmt == "csv":
        out.write(tab.to_csv())
    else:
        emit(out, tab.to_json())


def error_object(e: BaseException) -> dict:
    name = e.name if isinstance(e, GaussFracError) else type(e).__name__
    obj = {"name": name, "message": str(e)}
    for attr in ("index", "steps", "junction", "clause"):
        v = getattr(e, attr, None)
        if v not in (None, ""):
            obj[attr] = v
    partial = getattr(e, "partial", None)
    if partial is not None:
        obj["partial_quotients"] = [format_gaussian(a) for a in getattr(partial, "quotients", partial)]
    return {"error": obj}


# argument parser ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file overriding defaults")
    p.add_argument("--prec", type=int, help="working precision in bits (64..4096)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)


def _alg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alg", help="hurwitz, shifted-hurwitz, nearest-even, first-quadrant, ppoi, ppoi-literal")
    p.add_argument("--d", help="shift for shifted-hurwitz, e.g. 0.3 or 1/2+1/4i")
    p.add_argument("--r", help="radius for shifted-hurwitz, in [1/sqrt2, 1]")


def _value(p: argparse.ArgumentParser) -> None:
    p.add_argument("--surd", help='coefficients "alpha,beta,gamma" of alpha z^2 + beta z + gamma')
    p.add_argument("--branch", help="re,im hint selecting the root (default: larger real part)")
    p.add_argument("--value", help="exact Gaussian rational, e.g. 3/2+1/2i or (3+1i)/2")
    p.add_argument("--approx", help="re,im,radius of a certified disc")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaussfrac", description="Complex continued fractions over the Gaussian integers.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="partial quotients of a number")
    _common(p), _alg(p), _value(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--iterates", action="store_true", help="include certified iterates")

    p = sub.add_parser("period", help="eventual period of a quadratic surd")
    _common(p), _alg(p), _value(p)
    p.add_argument("--max-steps", dest="max_steps", type=int)

    p = sub.add_parser("check", help="test a condition on a quotient sequence")
    _common(p)
    p.add_argument("--cond", required=True, help="H, Hprime, A or Aprime")
    p.add_argument("--seq", required=True, help="comma-separated Gaussian integers a_0,a_1,...")

    p = sub.add_parser("profile", help="denominator growth profile")
    _common(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--theta", default="sqrt5-1", help="golden, sqrt5-1 or a rational")

    p = sub.add_parser("admissible", help="empirical admissibility of a block")
    _common(p)
    p.add_argument("--block", required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--perturb")

    p = sub.add_parser("generic", help="concatenate admissible blocks with bridges")
    _common(p)
    p.add_argument("--blocks", required=True, help='blocks separated by ";", e.g. "3;-3;1+1i,2"')
    p.add_argument("--bridge-budget", dest="bridge_budget", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--perturb")

    p = sub.add_parser("probe-t72", help="g(prefix)(z) approaching zeta")
    _common(p), _alg(p), _value(p)
    p.add_argument("--lengths", default="4,8,16,24")
    p.add_argument("--points", default="1.5;2;3;1.5i;-2i;2+2i", help='";"-separated complex test points, |z| > 1')
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("probe-p75", help="convergence of g_i on generic points and on rho(pi(xi))")
    _common(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--lengths", default="2,4,6")
    p.add_argument("--x", help="explicit x sequence (default: built from alpha and beta)")
    p.add_argument("--s", help="offsets s_i for an explicit x sequence")
    p.add_argument("--junction", default="4")
    p.add_argument("--tolerance", type=float, default=1e-3)

    p = sub.add_parser("qform", help="values of (a - zeta1 b)(a - zeta2 b)")
    _common(p)
    p.add_argument("--mode", choices=("coverage", "isolation", "values"), default="coverage")
    p.add_argument("--zeta1", help='exact value, "golden" or "inf"')
    p.add_argument("--zeta2", help='exact value, "golden" or "inf"')
    p.add_argument("--N", default="5,10,20", help="box bound(s)")
    p.add_argument("--radius", default="2")
    p.add_argument("--cell", default="0.25")
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = build_config(args)
        COMMANDS[args.command](args, cfg, out)
        return EXIT_OK
    except COMPUTE_ERRORS as e:
        emit(out, error_object(e))
        return EXIT_COMPUTE
    except (UsageError, ValueError, KeyError, OSError) as e:
        # malformed input, including surds with rational roots and shape violations
        emit(out, error_object(e))
        return EXIT_USAGE
    except (GaussFracError, ZeroDivisionError) as e:
        emit(out, error_object(e))
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
