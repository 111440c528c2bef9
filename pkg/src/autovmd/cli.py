"""Command-line interface: ``autovmd {analyze|decompose|bench|plot}``.

Exit codes: 0 success, 1 usage or I/O error, 2 non-convergence, 3 a bench
bound failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import AutoVmdError
from .pipeline import (
    InputSpec, PipelineConfig, analyze, load_config, run_record, run_vmd,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONCONVERGED = 2
EXIT_BENCH_FAILED = 3

logger = logging.getLogger("autovmd")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p):
    p.add_argument("--config", help="JSON pipeline config; flags override it")
    p.add_argument("--grid", type=int, help="number of grid intervals N (nodes = N + 1)")
    p.add_argument("--samples", type=int, help="sample count for generated signals")
    p.add_argument("--pad", type=float, help="extension pad fraction per side (0 disables)")
    p.add_argument("--eps", type=float, help="baseline stopping tolerance")
    p.add_argument("--theta", type=float, help="lambda step size (default: automatic)")
    p.add_argument("--gamma", type=float, help="mu step size (default: automatic)")
    p.add_argument("--alpha0", type=float, help="curvature weight")
    p.add_argument("--beta0", type=float, help="integral weight")
    p.add_argument("--max-iter", type=int, help="baseline iteration cap")
    p.add_argument("--vmd-alpha", type=float, help="VMD bandwidth penalty")
    p.add_argument("--tau", type=float, help="VMD multiplier step")
    p.add_argument("--out", help="output directory")
    p.add_argument("--plots", action="store_true", help="also write SVG figures")


def _add_input_flags(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--signal", help="generated signal: exp1..exp5 or bandstop")
    src.add_argument("--csv", help="one-column CSV of samples")
    p.add_argument("--take", type=int, help="keep only the first n samples")
    p.add_argument("--downsample", type=int, default=1, help="keep every r-th sample")
    p.add_argument("--sample-rate", type=float, default=1.0, help="CSV sample rate")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="autovmd", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("analyze", "baseline and mode detection"),
                       ("decompose", "full pipeline including VMD and metrics")):
        p = sub.add_parser(name, help=text)
        _add_input_flags(p)
        _add_config_flags(p)
        if name == "analyze":
            p.add_argument("--dump-matrix", help="write the BVP matrix and rhs as text")
    p = sub.add_parser("bench", help="run the synthetic experiment suite")
    _add_config_flags(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-vmd", action="store_true", help="skip the VMD stage")
    p = sub.add_parser("plot", help="render SVG figures from a run record")
    p.add_argument("record", help="run record JSON")
    p.add_argument("--out", help="output directory (default: next to the record)")
    return parser


def config_from_args(args) -> PipelineConfig:
    config = load_config(args.config) if getattr(args, "config", None) else PipelineConfig()
    pick = lambda **kv: {k: v for k, v in kv.items() if v is not None}  # noqa: E731
    config = config.with_overrides(
        baseline=pick(epsilon=args.eps, theta=args.theta, gamma=args.gamma,
                      alpha0=args.alpha0, beta0=args.beta0, max_iter=args.max_iter),
        spectrum=pick(grid_count=None if args.grid is None else args.grid + 1,
                      sample_count=args.samples, pad_fraction=args.pad),
        vmd=pick(alpha_penalty=args.vmd_alpha, tau=args.tau),
        output=pick(dir=args.out, emit_plots=True if args.plots else None),
    )
    return config


def _input_from_args(args) -> InputSpec:
    return InputSpec(args.signal, args.csv, args.take, args.downsample, args.sample_rate)


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def _centers(modes) -> str:
    return ";".join(f"{c:.4f}" for c in modes.centers)


def cmd_analyze(args, decompose_too: bool = False) -> int:
    config = config_from_args(args)
    source = _input_from_args(args)
    signal = source.load(config.spectrum.sample_count)
    analysis = analyze(signal, config)
    vmd = report = None
    if decompose_too:
        vmd, report = run_vmd(analysis, config)
    out = Path(config.output.dir)
    label = signal.label or "signal"
    record = run_record(args.command, source, config, analysis, vmd, report)
    record_path = out / f"{label}_{args.command}.json"
    _write_json(record_path, record)
    if getattr(args, "dump_matrix", None):
        from .stencils import assemble_system, build_stencils
        ext = analysis.extended
        st = build_stencils(ext.grid_count, ext.grid_spacing)
        n = ext.grid_count
        system = assemble_system(st, np.full(n, config.baseline.alpha0),
                                 np.full(n, config.baseline.beta0), ext.values)
        Path(args.dump_matrix).write_text(system.to_text(), encoding="utf-8")
    base = analysis.baseline
    print("label,K,centers_cps,iterations,converged,threshold")
    print(f"{label},{analysis.modes.count},{_centers(analysis.modes)},{base.iterations},"
          f"{base.converged},{analysis.modes.threshold:.6g}")
    if vmd is not None:
        vmd.to_csv(out / f"{label}_modes.csv", signal.sample_rate)
        print("experiment,K,CC,PR,recon_rel_err,vmd_iterations,vmd_converged")
        print(f"{label},{report.mode_count},{report.cc:.6g},{report.pr:.6g},"
              f"{report.recon_rel_err:.6g},{vmd.iterations},{vmd.converged}")
    if config.output.emit_plots:
        from .plotting import write_plots
        for path in write_plots(record, out):
            logger.info("wrote %s", path)
    logger.info("wrote %s", record_path)
    converged = base.converged and (vmd is None or vmd.converged)
    return EXIT_OK if converged else EXIT_NONCONVERGED


def cmd_bench(args) -> int:
    from .bench import bench_csv, bench_json, run_bench
    config = config_from_args(args)
    rows, ab = run_bench(config, workers=args.workers, with_vmd=not args.no_vmd)
    out = Path(config.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    text = bench_csv(rows, ab)
    (out / "bench.csv").write_text(text, encoding="utf-8")
    _write_json(out / "bench.json", bench_json(rows, ab))
    sys.stdout.write(text)
    if not all(r.converged for r in rows):
        return EXIT_NONCONVERGED
    if not (all(r.passed for r in rows) and ab.passed):
        return EXIT_BENCH_FAILED
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plotting import write_plots
    path = Path(args.record)
    with open(path, encoding="utf-8") as fh:
        record = json.load(fh)
    out = Path(args.out) if args.out else path.parent
    for p in write_plots(record, out):
        print(p)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "decompose":
            return cmd_analyze(args, decompose_too=True)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_plot(args)
    except (AutoVmdError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"autovmd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
