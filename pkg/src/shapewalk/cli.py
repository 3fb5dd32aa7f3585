"""Command-line frontend: ``shapewalk <subcommand> [flags]``.

Exit status is 0 on success, 1 on a validation error (bad flags, malformed
spec files) and 2 on an internal or numerical failure.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import mpmath

from . import dioph, groups, io, ortho, section, walk
from .exact import IDENTITY3
from .lattice2 import Lattice2, height, shape
from .rng import Xoshiro256

EXIT_OK, EXIT_VALIDATION, EXIT_FAILURE = 0, 1, 2


class ValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# -- argument helpers ------------------------------------------------------------

NAMED_X0 = {
    "std": ((1, 0, 0), (0, 1, 0)),
    "lambda0": ((1, 0, 0), (0, 1, 0)),
    "lambdainf": ((0, 1, 0), (0, 0, 2)),
    "hex": ((1, -1, 0), (0, 1, -1)),
}


def parse_lattice(text: str) -> Lattice2:
    """A named lattice or 'u1,u2,u3;w1,w2,w3' with rational entries."""
    if text in NAMED_X0:
        return Lattice2.exact(*NAMED_X0[text])
    try:
        u, w = (tuple(Fraction(x) for x in part.split(",")) for part in text.split(";"))
        if len(u) != 3 or len(w) != 3:
            raise ValueError("each basis vector needs three entries")
        return Lattice2.exact(u, w)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad lattice {text!r}: {exc}") from None


def parse_measure(args) -> groups.MeasureSpec:
    name = args.measure
    if name is None:
        name = {"I": "I", "II": "gamma0"}[args.case]
    try:
        return groups.load_measure(name)
    except groups.MeasureError as exc:
        raise ValidationError(str(exc)) from None


_SURD = re.compile(
    r"^\(?\s*(?P<P>[+-]?\d+)?\s*(?P<sign>[+-])?\s*sqrt\((?P<D>\d+)\)\s*\)?\s*(?:/\s*(?P<Q>[+-]?\d+))?$")


def parse_real(text: str, dps: int):
    """Rational 'p/q', surd '(P+sqrt(D))/Q', or a decimal read at ``dps`` digits."""
    text = text.strip()
    m = _SURD.match(text.replace(" ", ""))
    if m:
        P = int(m.group("P") or 0)
        sgn = -1 if m.group("sign") == "-" else 1
        Q = int(m.group("Q") or 1)
        if sgn < 0:
            P, Q = -P, -Q
        return dioph.QuadraticSurd(P, int(m.group("D")), Q)
    try:
        return Fraction(text) if re.fullmatch(r"[+-]?\d+(/\d+)?", text) else mpmath.mpf(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse real number {text!r}") from None


def parse_poly(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"bad polynomial {text!r}; expected e.g. 1,0,-3,-1") from None


def furstenberg_lattice(kind: str, dps: int) -> Lattice2:
    """The three lattices of the ordering experiment: span{(r, sqrt2, -sqrt2), (1,1,1)}."""
    with mpmath.workdps(dps):
        s2 = mpmath.sqrt(2)
        if kind == "bounded":
            r = 1 + s2
        elif kind == "an":
            f = dioph.cf_value([0] + list(range(1, 61)))
            r = mpmath.mpf(f.numerator) / f.denominator
        elif kind == "liouville":
            f = sum(Fraction(1, 10 ** math.factorial(k)) for k in range(1, 5))
            r = mpmath.mpf(f.numerator) / f.denominator
        else:
            raise ValidationError(f"unknown lattice kind {kind!r}")
        return dioph.ratio_lattice(r, s2, -s2)


# -- subcommands ------------------------------------------------------------------

def cmd_walk(args, argv):
    mu = parse_measure(args)
    x0 = parse_lattice(args.x0)
    rep = walk.run_walk(mu, x0, args.steps, args.seed, args.stride)
    with _output(args.out) as out:
        io.write_csv(out, io.header_lines("walk", argv, args.seed),
                     ["step", "re_z", "im_z", "height"],
                     zip(rep.record_steps, rep.re, rep.im, rep.heights))
    if args.summary:
        payload = {"measure": mu.name, "steps": args.steps, "stride": args.stride,
                   "samples": rep.n_samples,
                   "fraction_height_le": {str(m): rep.fraction_below(m) for m in args.height_levels}}
        ref = walk.BinnedReference(args.y_max, args.grid, args.grid)
        if rep.n_samples >= 100 * ref.n_bins:
            payload["gof"] = walk.gof_hyperbolic(rep, ref).as_dict()
        with _output(args.summary) as out:
            io.write_json(out, "walk", argv, args.seed, payload)


def cmd_gof(args, argv):
    try:
        cols = io.read_csv_columns(args.input)
        re_z = [float(x) for x in cols["re_z"]]
        im_z = [float(x) for x in cols["im_z"]]
    except (OSError, KeyError, ValueError) as exc:
        raise ValidationError(f"cannot read walk CSV {args.input!r}: {exc}") from None
    ref = walk.BinnedReference(args.y_max, args.grid, args.grid)
    try:
        res = walk.gof_from_counts(ref.counts(re_z, im_z), ref)
    except walk.UndersampledError as exc:
        raise ValidationError(str(exc)) from None
    with _output(args.out) as out:
        io.write_json(out, "gof", argv, None, {
            "input": args.input, "y_max": args.y_max, "grid": args.grid,
            "tail_mass": ref.tail_mass(), **res.as_dict()})


def cmd_lyapunov(args, argv):
    mu = parse_measure(args)
    est = walk.estimate_lyapunov(mu, args.steps, args.replicas, args.seed)
    with _output(args.out) as out:
        io.write_json(out, "lyapunov", argv, args.seed, {"measure": mu.name, **est.as_dict()})


def probe_points(n: int, min_height: float, seed: int) -> list[Lattice2]:
    """n thin lattices with heights in [min_height, 2 min_height], random orientation."""
    rng = Xoshiro256(seed, stream=10**6)
    return [walk.thin_lattice(min_height * (1 + rng.random()), walk.random_rotation(rng))
            for _ in range(n)]


def cmd_contraction(args, argv):
    mu = parse_measure(args)
    pts = probe_points(args.points, args.min_height, args.seed)
    results = [walk.contraction_probe(mu, d, pts, args.inner_samples, args.seed).as_dict()
               for d in args.delta]
    with _output(args.out) as out:
        io.write_json(out, "contraction", argv, args.seed, {"measure": mu.name, "probes": results})


def cmd_section_curve(args, argv):
    pts = section.curve_sample(section.tan_grid(args.points))
    with _output(args.out) as out:
        io.write_csv(out, io.header_lines("section-curve", argv, None), ["t", "re_z", "im_z"],
                     ((t, s.re, s.im) for t, s in pts))


def random_rational(rng: Xoshiro256, max_abs: int) -> Fraction:
    num = rng.randbelow(2 * max_abs + 1) - max_abs
    den = rng.randbelow(max_abs) + 1
    return Fraction(num, den)


def _both_sides(t) -> bool:
    try:
        section.equivariance_check(t, "plus")
        section.equivariance_check(t, "minus")
        return True
    except section.EquivarianceError:
        return False


def cmd_section_verify(args, argv):
    rng = Xoshiro256(args.seed)
    ts = [random_rational(rng, args.max_abs) for _ in range(args.t_count)]
    inf_ok = _both_sides(section.INF)
    failures = [t for t in ts if not _both_sides(t)]
    with _output(args.out) as out:
        out.write("\n".join(io.header_lines("section-verify", argv, args.seed)) + "\n")
        out.write(f"t=inf: {'exact' if inf_ok else 'FAILED'}\n")
        out.write(f"{len(ts) - len(failures)}/{len(ts)} exact\n")
        for t in failures:
            out.write(f"FAIL t={t}\n")
    if failures or not inf_ok:
        raise section.EquivarianceError(f"{len(failures) + (not inf_ok)} parameters failed")


def cmd_ortho_shapes(args, argv):
    samples = ortho.conj1_sample(args.words, args.len, args.seed)
    cols = ["word_index", "word_len", "re_z", "im_z"]
    if args.with_v:
        cols += ["v1", "v2", "v3", "n1", "n2", "n3"]
    rows = ([s.index, s.word_len, s.shape.re, s.shape.im] + (list(s.v) + list(s.normal) if args.with_v else [])
            for s in samples)
    with _output(args.out) as out:
        io.write_csv(out, io.header_lines("ortho-shapes", argv, args.seed), cols, rows)


def cmd_aorbit(args, argv):
    lat = furstenberg_lattice(args.lattice, args.dps) if args.lattice in ("bounded", "an", "liouville") \
        else parse_lattice(args.lattice)
    box, grid = tuple(args.box), tuple(args.grid)
    field = dioph.a_orbit_scan(lat, box, grid)
    with _output(args.out) as out:
        rows = ((a, b, field.heights[i, j]) for i, a in enumerate(field.t1) for j, b in enumerate(field.t2))
        io.write_csv(out, io.header_lines("aorbit", argv, None), ["t1", "t2", "height"], rows)
    if args.report:
        with mpmath.workdps(args.dps):
            rep = dioph.furstenberg_report(lat, box, grid, args.cf_terms)
        with _output(args.report) as out:
            io.write_json(out, "aorbit", argv, None, {"lattice": args.lattice, **rep})


def cmd_cf(args, argv):
    with mpmath.workdps(args.dps):
        x = parse_real(args.x, args.dps)
        exp = dioph.cf_expand(x, args.terms)
    with _output(args.out) as out:
        io.write_json(out, "cf", argv, None, exp.as_dict())


def cmd_cubic_units(args, argv):
    try:
        spec = dioph.cubic_field(parse_poly(args.poly), args.dps)
    except dioph.FieldError as exc:
        raise ValidationError(str(exc)) from None
    units = dioph.unit_search(spec, args.bound)
    with _output(args.out) as out:
        io.write_json(out, "cubic-units", argv, None, {
            "poly": list(parse_poly(args.poly)), "discriminant": spec.disc,
            "roots": [mpmath.nstr(r, 30) for r in spec.roots], "bound": args.bound,
            "log_rank": dioph.log_rank(units), "units": [u.as_dict() for u in units]})


def cmd_conditioned(args, argv):
    try:
        spec = dioph.cubic_field(parse_poly(args.poly), args.dps)
    except dioph.FieldError as exc:
        raise ValidationError(str(exc)) from None
    lo, hi = args.range
    samples, truncated = dioph.conditioned_shapes(spec, exponents=range(lo, hi + 1))
    with _output(args.out) as out:
        header = io.header_lines("conditioned", argv, None)
        if truncated:
            header.append(f"# truncated: {len(truncated)} exponent pairs beyond working precision")
        io.write_csv(out, header,
                     ["m", "n", "re_z", "im_z", "re_z_transport", "im_z_transport", "height", "agree"],
                     ((s.exponents[0], s.exponents[1], s.shape.re, s.shape.im,
                       s.shape_transport.re, s.shape_transport.im, s.height, s.agree) for s in samples))
    if not all(s.agree for s in samples):
        raise ArithmeticError("dual-route disagreement in conditioned shapes")


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shapewalk", description="Random walks and exact checks on homothety classes of 2-lattices in R^3.",
                epilog="Exit status: 0 success, 1 validation error, 2 numerical or internal failure.")
    p.add_argument("--config", help="key=value file of defaults for the subcommand")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def measure_flags(sp, case_default="I"):
        sp.add_argument("--measure", help="built-in name (I, gamma0, fig3a..fig3d) or spec file")
        sp.add_argument("--case", choices=["I", "II"], default=case_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")

    sp = sub.add_parser("walk", help="simulate a trajectory, CSV of shapes and heights")
    measure_flags(sp)
    sp.add_argument("--x0", default="std")
    sp.add_argument("--steps", type=int, default=10_000)
    sp.add_argument("--stride", type=int, default=walk.DEFAULT_STRIDE)
    sp.add_argument("--summary", help="also write a JSON summary here")
    sp.add_argument("--height-levels", type=float, nargs="+", default=[10.0])
    sp.add_argument("--y-max", type=float, default=6.0)
    sp.add_argument("--grid", type=int, default=12)
    sp.set_defaults(func=cmd_walk)

    sp = sub.add_parser("gof", help="goodness of fit of a walk CSV against the hyperbolic measure")
    sp.add_argument("--input", required=True)
    sp.add_argument("--y-max", type=float, default=6.0)
    sp.add_argument("--grid", type=int, default=12)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gof)

    sp = sub.add_parser("lyapunov", help="Lyapunov vector and weight evaluations")
    measure_flags(sp)
    sp.add_argument("--steps", type=int, default=100_000)
    sp.add_argument("--replicas", type=int, default=16)
    sp.set_defaults(func=cmd_lyapunov)

    sp = sub.add_parser("contraction", help="probe of the contraction hypothesis for u_X^delta")
    measure_flags(sp)
    sp.add_argument("--delta", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--min-height", type=float, default=10.0)
    sp.add_argument("--inner-samples", type=int, default=20_000)
    sp.set_defaults(func=cmd_contraction)

    sp = sub.add_parser("section-curve", help="shapes of Lambda_t along a tan-spaced grid")
    sp.add_argument("--points", type=int, default=2000)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_section_curve)

    sp = sub.add_parser("section-verify", help="exact equivariance of the section")
    sp.add_argument("--t-count", type=int, default=1000)
    sp.add_argument("--max-abs", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_section_verify)

    sp = sub.add_parser("ortho-shapes", help="shapes g Lambda_(1,1,1) for random g in <u+-(2), k>")
    sp.add_argument("--words", type=int, default=15_000)
    sp.add_argument("--len", type=int, default=25)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--with-v", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_ortho_shapes)

    sp = sub.add_parser("aorbit", help="height field of a diagonal orbit")
    sp.add_argument("--lattice", default="std",
                    help="bounded | an | liouville | a named or explicit lattice")
    sp.add_argument("--box", type=float, nargs=2, default=[8.0, 8.0])
    sp.add_argument("--grid", type=int, nargs=2, default=[161, 161])
    sp.add_argument("--dps", type=int, default=dioph.DEFAULT_DPS)
    sp.add_argument("--cf-terms", type=int, default=20)
    sp.add_argument("--report", help="also write the Furstenberg report (JSON) here")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_aorbit)

    sp = sub.add_parser("cf", help="certified continued fraction digits")
    sp.add_argument("--x", required=True)
    sp.add_argument("--terms", type=int, default=20)
    sp.add_argument("--dps", type=int, default=dioph.DEFAULT_DPS)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_cf)

    sp = sub.add_parser("cubic-units", help="units of Z[alpha] in a coefficient box")
    sp.add_argument("--poly", default="1,0,-3,-1")
    sp.add_argument("--bound", type=int, default=5)
    sp.add_argument("--dps", type=int, default=dioph.DEFAULT_DPS)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_cubic_units)

    sp = sub.add_parser("conditioned", help="shapes of conditioned directional lattices")
    sp.add_argument("--poly", default="1,0,-3,-1")
    sp.add_argument("--range", type=int, nargs=2, default=[-6, 6])
    sp.add_argument("--dps", type=int, default=dioph.DEFAULT_DPS)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_conditioned)
    return p


def _load_config(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        config = _load_config(args.config)
        # re-parse with config values as flags placed before the real ones
        cfg_argv = []
        for k, v in config.items():
            cfg_argv += [f"--{k.replace('_', '-')}"] + v.split()
        argv = list(argv)
        i = argv.index(args.command)
        args = parser.parse_args(argv[: i + 1] + cfg_argv + argv[i + 1:])
    return args


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
        args.func(args, argv)
        return EXIT_OK
    except (ValidationError, groups.MeasureError) as exc:
        print(f"shapewalk: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # numerical or internal failure
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"shapewalk: failure: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
