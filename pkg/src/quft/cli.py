"""Command-line front end.

Verbs:

* generate: sample an analytic signal descriptor onto a grid (QFLD1 file).
* transform: spatial field file to spectrum file, fast or direct path.
* verify: run a built-in residual suite (inverse, scaling, gaussian,
  envelope, or all); exit 1 on failure.
* miyachi: classify the rate pair, evaluate the uncertainty functionals,
  and report nested-window behavior; optionally emit plot data and render
  a figure next to it.
* classify: just the regime of (alpha, beta).

Exit codes: 0 success, 1 verification failure, 2 usage or parse errors.
Identical invocations write byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .field import FieldFormatError, Grid2D, QField, load_field, save_field
from .quaternion import Quaternion
from .signals import (Gaussian, HermiteGauss, PolyGaussian, exact_qft,
                      parse_signal, sample, sample_spectrum, verify_envelope)
from .transform import check_scaling, iqft, qft_direct, qft_fast, save_spectrum
from .uncertainty import (UPParams, classify, evaluate_report, miyachi_nested,
                          nested_verdict, report_to_text, witness_subcritical)

USAGE_ERROR = 2
VERIFY_ERROR = 1


class CliError(Exception):
    """Usage-level failure; maps to exit code 2."""


def _grid_from_args(tokens) -> Grid2D:
    try:
        return Grid2D(int(tokens[0]), int(tokens[1]), float(tokens[2]), float(tokens[3]))
    except (ValueError, IndexError) as e:
        raise CliError(f"bad --grid: {e}") from e


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CliError(message)


def cmd_generate(args) -> int:
    try:
        signal = parse_signal(" ".join(args.descriptor))
    except ValueError as e:
        raise CliError(str(e)) from e
    grid = _grid_from_args(args.grid)
    field = sample(signal, grid)
    save_field(field, args.out)
    print(f"wrote {args.out} ({grid.n1}x{grid.n2} field)")
    return 0


def cmd_transform(args) -> int:
    try:
        field = load_field(args.input)
    except (FieldFormatError, OSError) as e:
        raise CliError(f"{args.input}: {e}") from e
    spectrum = qft_direct(field) if args.direct else qft_fast(field)
    save_spectrum(spectrum, args.out)
    path = "direct" if args.direct else "fast"
    print(f"wrote {args.out} ({path} transform)")
    return 0


def _verify_inverse() -> tuple[str, float, float]:
    rng = np.random.default_rng(2024)
    grid = Grid2D(32, 32, 0.25, 0.25)
    field = QField(grid, rng.uniform(-1.0, 1.0, size=(32, 32, 4)))
    back = iqft(qft_fast(field))
    residual = float(np.abs(back.values - field.values).max())
    return "round-trip", residual, 1e-8


def _verify_scaling() -> tuple[str, float, float]:
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    field = sample(Gaussian(q=Quaternion(1.0), a1=math.pi, a2=math.pi), grid)
    report = check_scaling(field, 2)
    return "dilation residual", report.residual, 1e-6


def _verify_gaussian() -> tuple[str, float, float]:
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    worst = 0.0
    for signal in (Gaussian(q=Quaternion(1.0), a1=math.pi, a2=math.pi),
                   Gaussian(q=Quaternion(0.5, -0.5, 1.0, 0.25), a1=math.pi / 2, a2=2 * math.pi)):
        numeric = qft_fast(sample(signal, grid))
        closed = sample_spectrum(signal, grid)
        worst = max(worst, float(np.abs(numeric.values - closed.values).max()))
    return "closed-form residual", worst, 1e-6


def _verify_envelope() -> tuple[str, float, float]:
    grid = Grid2D(128, 128, 1 / 16, 1 / 16)
    worst = 0.0
    polys = [
        PolyGaussian(gamma=1.0, coeffs={(1, 0): 1.0}),
        PolyGaussian(gamma=1.0, coeffs={(1, 1): 1.0}),
        PolyGaussian(gamma=1.0, coeffs={(2, 1): 1.0}),
    ]
    for signal in polys:
        spectrum = qft_fast(sample(signal, grid))
        env = exact_qft(signal)
        fit = verify_envelope(spectrum, env.rate, env.degree)
        worst = max(worst, abs(fit.rate - env.rate) / env.rate)
    return "envelope rate error", worst, 0.02

_SUITES = {
    "inverse": _verify_inverse,
    "scaling": _verify_scaling,
    "gaussian": _verify_gaussian,
    "envelope": _verify_envelope,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        label, residual, bound = _SUITES[name]()
        ok = residual <= bound
        failed |= not ok
        status = "ok" if ok else "FAIL"
        print(f"{name}: {label} {residual:.3e} (bound {bound:.0e}) {status}")
    return VERIFY_ERROR if failed else 0


def cmd_classify(args) -> int:
    c = classify(args.alpha, args.beta)
    print(f"regime={c.regime}")
    print(f"conclusion={c.conclusion}")
    return 0


def _witness_signal(args):
    k, l = args.witness
    if args.gamma is None:
        return witness_subcritical(args.alpha, args.beta, k, l)
    lo, hi = args.alpha / math.pi, math.pi / args.beta
    if not lo < args.gamma < hi:
        raise CliError(
            f"--gamma must lie in ({lo:.6g}, {hi:.6g}) for these rates")
    return HermiteGauss(k=k, l=l, gamma=args.gamma)


def _spectrum_for_miyachi(args):
    """Field and spectrum for the report, honoring the input variant."""
    if args.witness is not None:
        signal = _witness_signal(args)
        grid = _grid_from_args(args.grid)
        field = sample(signal, grid)
        return (field, qft_fast(field),
                f"witness hermite {signal.k} {signal.l} gamma={signal.gamma:.6g}")
    if args.signal is not None:
        try:
            signal = parse_signal(args.signal)
        except ValueError as e:
            raise CliError(str(e)) from e
        grid = _grid_from_args(args.grid)
        field = sample(signal, grid)
        if isinstance(signal, Gaussian):
            # exactly sampled spectrum: immune to the rounding floor under the weight
            return field, sample_spectrum(signal, grid), "gaussian (exact spectrum)"
        return field, qft_fast(field), "numeric spectrum"
    _require(args.input is not None, "one of FIELD, --signal, --witness is required")
    try:
        field = load_field(args.input)
    except (FieldFormatError, OSError) as e:
        raise CliError(f"{args.input}: {e}") from e
    return field, qft_fast(field), "numeric spectrum"


def _render_nested_plot(pairs, png_path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    extents = [p[0] for p in pairs]
    values = [p[1] for p in pairs]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(extents, values, marker="o", color="#2a6f97")
    ax.set_xlabel("frequency window extent")
    ax.set_ylabel("log-plus functional")
    ax.set_title("nested-window uncertainty functional")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def cmd_miyachi(args) -> int:
    field, spectrum, source = _spectrum_for_miyachi(args)
    params = UPParams(alpha=args.alpha, beta=args.beta, rho=args.rho,
                      p=args.p, q=args.q)
    report = evaluate_report(field, spectrum, params)

    grid = spectrum.grid
    xi_max = min(1.0 / (2.0 * grid.h1), 1.0 / (2.0 * grid.h2))
    levels = max(2, args.nested)
    extents = [xi_max / 2 ** (levels - 1 - i) for i in range(levels)]
    nested = miyachi_nested(spectrum, params.beta, params.rho, extents)
    verdict = nested_verdict([r.value for r in nested]) if levels >= 3 else "indeterminate"

    lines = report_to_text(report)
    lines += f"source={source}\n"
    lines += f"nested_verdict={verdict}\n"
    for r in nested:
        lines += f"nested_{r.extent:g}={r.value:.17g} divergent={'true' if r.divergent else 'false'}\n"
    if args.out:
        Path(args.out).write_text(lines, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(lines)

    if args.emit_plot_data:
        stem = Path(args.out).with_suffix("") if args.out else Path("miyachi")
        data_path = stem.with_name(stem.name + "_nested.txt")
        png_path = stem.with_name(stem.name + "_nested.png")
        rows = "".join(f"{r.extent:.17g} {r.value:.17g}\n" for r in nested)
        data_path.write_text(rows, encoding="utf-8")
        _render_nested_plot([(r.extent, r.value) for r in nested], png_path)
        print(f"wrote {data_path}")
        print(f"wrote {png_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quft",
        description="Two-sided quaternion Fourier transform toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample an analytic signal to a QFLD1 file")
    g.add_argument("descriptor", nargs="+",
                   help="signal descriptor, e.g. 'gaussian 1 0 0 0 3.14 3.14'")
    g.add_argument("--grid", nargs=4, required=True, metavar=("N1", "N2", "H1", "H2"))
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("transform", help="QFLD1 field file to QSPEC1 spectrum file")
    t.add_argument("input", help="input field path")
    t.add_argument("--out", required=True)
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--fast", action="store_true", default=True,
                      help="cascaded transform (default)")
    mode.add_argument("--direct", action="store_true",
                      help="literal double-sum oracle (slow)")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="run a built-in residual suite")
    v.add_argument("suite", choices=sorted(_SUITES) + ["all"])
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="regime of a rate pair")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--beta", type=float, required=True)
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("miyachi", help="uncertainty report for a field or signal")
    m.add_argument("input", nargs="?", default=None, help="QFLD1 field path")
    m.add_argument("--signal", help="analytic signal descriptor instead of a file")
    m.add_argument("--witness", nargs=2, type=int, metavar=("K", "L"),
                   help="use the subcritical witness with these orders")
    m.add_argument("--gamma", type=float, default=None,
                   help="witness Gaussian rate; must lie in (alpha/pi, pi/beta)"
                        " (default: interval midpoint)")
    m.add_argument("--grid", nargs=4, default=["128", "128", "0.0625", "0.0625"],
                   metavar=("N1", "N2", "H1", "H2"),
                   help="sampling grid for --signal/--witness")
    m.add_argument("--alpha", type=float, required=True, help="spatial decay rate")
    m.add_argument("--beta", type=float, required=True, help="frequency decay rate")
    m.add_argument("--rho", type=float, required=True, help="log-plus threshold")
    m.add_argument("--p", type=float, default=1.0)
    m.add_argument("--q", type=float, default=1.0)
    m.add_argument("--nested", type=int, default=3, metavar="K",
                   help="number of nested windows (default 3)")
    m.add_argument("--out", default=None, help="write the report here instead of stdout")
    m.add_argument("--emit-plot-data", action="store_true",
                   help="write (extent, value) rows and render a PNG alongside")
    m.set_defaults(func=cmd_miyachi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except (FieldFormatError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
