"""Command line: solve-rational, solve-lens, trace-critical, census, verify-example."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .census import run_census
from .critical import default_bbox, trace_critical_set
from .errors import BoundViolation, HypothesisViolation, NumericalFailure, RatHarmonicError
from .lensing import LensConfig, RadialBlob, find_images, find_images_extended, lens_to_rational
from .rational import RationalFunction
from .roots import RootOptions
from .solver import SolveOptions, solve_zeros

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_NUMERICAL = 4
EXIT_VERIFY = 5

log = logging.getLogger("ratharmonic")


class UsageError(Exception):
    pass


def _pair(text: str) -> complex:
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected X,Y but got {text!r}") from None
    return complex(x, y)


def _floats(text: str, k: int) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected {k} comma-separated numbers, got {text!r}") from None
    if len(vals) != k:
        raise UsageError(f"expected {k} comma-separated numbers, got {text!r}")
    return vals


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_rational(path: str) -> RationalFunction:
    data = _load_json(path)
    try:
        return RationalFunction.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed rational function in {path}: {exc}") from None


def _load_lens(path: str):
    """Returns (config or None, blobs or None, gamma, sigma_sign, source or None)."""
    data = _load_json(path)
    try:
        gamma = float(data.get("gamma", 0.0))
        sign = int(data.get("sigma_sign", 1))
        masses = data["masses"]
        source = complex(*data["source"]) if data.get("source") is not None else None
        if any("R" in m for m in masses):
            blobs = [RadialBlob(complex(*m["z"]), float(m["m"]), float(m["R"])) for m in masses]
            return None, blobs, gamma, sign, source
        config = LensConfig(gamma, sign, tuple((float(m["m"]), complex(*m["z"])) for m in masses))
        return config, None, gamma, sign, source
    except HypothesisViolation:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed lens config in {path}: {exc}") from None


def _solve_opts(args) -> SolveOptions:
    opts = SolveOptions(seed=args.seed, perturb=getattr(args, "perturb", False))
    if args.tol_accept is not None:
        opts = replace(opts, tol_accept=args.tol_accept)
    ro = RootOptions()
    if args.root_tol is not None:
        ro = replace(ro, tol=args.root_tol)
    if args.root_max_iters is not None:
        ro = replace(ro, max_iters=args.root_max_iters)
    return replace(opts, roots=ro)


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_solve_rational(args) -> int:
    r = _load_rational(args.rational)
    rep = solve_zeros(r, _solve_opts(args))
    _emit(rep.to_json(), args.out)
    if args.svg:
        from .plotting import save_critical

        pts = [h.location for h in rep.zeros] + [p for p, _ in rep.pole_orders]
        cs = trace_critical_set(r, _bbox(args) or default_bbox(pts), args.res)
        save_critical(args.svg, cs, rep.zeros, [p for p, _ in rep.pole_orders])
    return EXIT_OK


def _bbox(args):
    return _floats(args.bbox, 4) if getattr(args, "bbox", None) else None


def cmd_solve_lens(args) -> int:
    config, blobs, gamma, sign, source = _load_lens(args.config)
    if args.source:
        source = _pair(args.source)
    if source is None:
        raise UsageError("no source position: give 'source' in the config or --source X,Y")
    opts = _solve_opts(args)
    if blobs is not None:
        imgs = find_images_extended(blobs, gamma, sign, source, opts)
        masses = [(b.total_mass, b.center) for b in blobs]
    else:
        imgs = find_images(config, source, opts)
        masses = list(config.masses)
    _emit(imgs.to_json(), args.out)
    if args.svg:
        from .plotting import save_images

        r = imgs.report.rational
        pts = [h.location for h in imgs.images] + [z for _, z in masses]
        cs = trace_critical_set(r, _bbox(args) or default_bbox(pts), args.res)
        save_images(args.svg, imgs, masses, cs)
    return EXIT_OK


def cmd_trace_critical(args) -> int:
    if bool(args.rational) == bool(args.config):
        raise UsageError("give exactly one of --rational or --config")
    zeros, poles = [], []
    if args.rational:
        r = _load_rational(args.rational)
    else:
        config, blobs, gamma, sign, source = _load_lens(args.config)
        if args.source:
            source = _pair(args.source)
        if blobs is not None:
            config = LensConfig(gamma, sign, tuple((b.total_mass, b.center) for b in blobs))
        r = lens_to_rational(config, source if source is not None else 0j)
    if r.degree >= 2:
        rep = solve_zeros(r, _solve_opts(args))
        zeros, poles = rep.zeros, [p for p, _ in rep.pole_orders]
    bbox = _bbox(args) or default_bbox([h.location for h in zeros] + poles or [0j])
    cs = trace_critical_set(r, bbox, args.res)
    if args.out:
        _emit(cs.to_json(), args.out)
    from .plotting import save_critical

    save_critical(args.svg, cs, zeros, poles)
    return EXIT_OK


def cmd_census(args) -> int:
    try:
        degrees = [int(d) for d in args.degrees.split(",")]
    except ValueError:
        raise UsageError(f"bad --degrees {args.degrees!r}") from None
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    opts = _solve_opts(args)
    try:
        census = run_census(degrees, args.trials, args.seed, args.workers, opts)
    except BoundViolation as exc:
        repro = exc.args[1] if len(exc.args) > 1 else {}
        print(f"BOUND VIOLATION: {exc.args[0]}", file=sys.stderr)
        print(json.dumps(repro, indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_VERIFY
    _emit(census, args.out)
    if args.svg:
        from .plotting import save_census

        save_census(args.svg, census)
    return EXIT_OK


def cmd_verify_example(args) -> int:
    from .example import verify_example

    tol = args.tol_accept if args.tol_accept is not None else 1e-8
    checks = verify_example(tol=max(tol, 1e-8), tol_accept=tol, skip_census=args.skip_census)
    for c in checks:
        print(c.line())
    if args.out:
        _emit({"checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]}, args.out)
    if args.svg:
        from .example import EXAMPLE_BBOX
        from .plotting import save_critical
        from .rational import five_zero_example

        r = five_zero_example()
        rep = solve_zeros(r)
        cs = trace_critical_set(r, EXAMPLE_BBOX, 512)
        save_critical(args.svg, cs, rep.zeros, [p for p, _ in rep.pole_orders])
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratharmonic", description="Zeros of conj(r(z)) - z and n-point lens images.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, svg_required=False):
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--svg", required=svg_required, help="figure output path (.svg, .png, .pdf)")
        sp.add_argument("--tol-accept", type=float, default=None)
        sp.add_argument("--root-tol", type=float, default=None)
        sp.add_argument("--root-max-iters", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("solve-rational", help="all zeros of conj(r(z)) - z")
    sp.add_argument("--rational", required=True)
    sp.add_argument("--perturb", action="store_true", help="retry on r - c if a zero is singular")
    sp.add_argument("--bbox")
    sp.add_argument("--res", type=int, default=512)
    common(sp)
    sp.set_defaults(func=cmd_solve_rational)

    sp = sub.add_parser("solve-lens", help="images of a point source behind an n-point lens")
    sp.add_argument("--config", required=True)
    sp.add_argument("--source")
    sp.add_argument("--perturb", action="store_true")
    sp.add_argument("--bbox")
    sp.add_argument("--res", type=int, default=512)
    common(sp)
    sp.set_defaults(func=cmd_solve_lens)

    sp = sub.add_parser("trace-critical", help="critical set and its image")
    sp.add_argument("--rational")
    sp.add_argument("--config")
    sp.add_argument("--source")
    sp.add_argument("--bbox")
    sp.add_argument("--res", type=int, default=512)
    common(sp, svg_required=True)
    sp.set_defaults(func=cmd_trace_critical)

    sp = sub.add_parser("census", help="random-coefficient zero-count census")
    sp.add_argument("--degrees", default="2,3,4,5")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify-example", help="reproduce the degree-two five-zero example")
    sp.add_argument("--skip-census", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_verify_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolation as exc:
        print(f"hypothesis violation ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NumericalFailure as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RatHarmonicError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
