"""Batch command-line pipeline.

Subcommands: ``denoise`` and ``despeckle`` run the full learn/rank/truncate/
recode pipeline on an image file, ``rank`` stops after atom ranking and emits
the reproducibility report, ``noisegen`` synthesizes corrupted inputs, and
``eval`` scores a result against a reference.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numeric failure.
``PBA_THREADS`` caps BLAS worker threads when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .basis import write_report_csv
from .denoiser import TRUNCATION_MODES, PrincipalBasisDenoiser, equivalent_sigma
from .exceptions import PBAError, PgmError
from .ksvd import save_dictionary
from .metrics import MetricConfig, psnr, ssim
from .noise import NoiseSpec, apply_noise
from .pgm import read_pgm, write_pgm

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

_THREAD_LIMITER = None


def _apply_thread_cap():
    global _THREAD_LIMITER
    value = os.environ.get("PBA_THREADS")
    if not value:
        return
    try:
        limit = int(value)
    except ValueError:
        print(f"pba: ignoring non-integer PBA_THREADS={value!r}", file=sys.stderr)
        return
    if limit < 1:
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return
    _THREAD_LIMITER = threadpool_limits(limits=limit)


def _add_pipeline_flags(sp, with_sigma=True):
    sp.add_argument("--patch-side", type=int, default=8, help="patch edge length in pixels")
    sp.add_argument("--stride", type=int, default=1, help="patch grid step in pixels")
    sp.add_argument("--n-atoms", type=int, default=256, help="dictionary size K")
    sp.add_argument("--iterations", type=int, default=10, help="learning sweeps")
    sp.add_argument("--max-atoms", type=int, default=32, help="per-sample sparsity cap")
    sp.add_argument("--error-gain", type=float, default=1.15,
                    help="gain g in the coding tolerance N*(g*sigma)^2")
    sp.add_argument("--gamma", type=float, default=None,
                    help="reassembly fidelity weight (default: 30/sigma, else 1)")
    if with_sigma:
        sp.add_argument("--sigma", type=float, default=None,
                        help="noise standard deviation driving the coding tolerance")
    sp.add_argument("--truncation-mode", choices=TRUNCATION_MODES, default="pba")
    sp.add_argument("--fixed-p", type=int, default=None,
                    help="basis size for --truncation-mode fixed-p")
    sp.add_argument("--remove-dc", action="store_true",
                    help="subtract each patch mean before coding")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report", default=None, help="JSON report path")
    sp.add_argument("--no-timings", action="store_true",
                    help="omit wall-clock timings from the JSON report")
    sp.add_argument("--pgm-format", choices=("p5", "p2"), default="p5",
                    help="output graymap flavor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pba",
        description="Reproducibility-ranked sparse dictionaries for image denoising.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("denoise", help="denoise an additively corrupted image")
    d.add_argument("input")
    d.add_argument("-o", "--output", required=True)
    _add_pipeline_flags(d)
    d.set_defaults(func=cmd_denoise)

    s = sub.add_parser("despeckle", help="despeckle a multiplicatively corrupted image")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--looks", type=int, required=True, help="number of speckle looks")
    _add_pipeline_flags(s, with_sigma=False)
    s.set_defaults(func=cmd_despeckle)

    r = sub.add_parser("rank", help="rank atoms by usage and report the basis choice")
    r.add_argument("input")
    r.add_argument("--csv", required=True, help="reproducibility report CSV path")
    r.add_argument("--dict-out", required=True, help="learned dictionary file path")
    _add_pipeline_flags(r)
    r.set_defaults(func=cmd_rank)

    n = sub.add_parser("noisegen", help="corrupt a clean image with seeded noise")
    n.add_argument("input")
    n.add_argument("-o", "--output", required=True)
    n.add_argument("--kind", choices=("gaussian", "speckle"), required=True)
    n.add_argument("--sigma", type=float, default=0.0)
    n.add_argument("--looks", type=int, default=1)
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--no-clip", dest="clip", action="store_false",
                   help="keep out-of-range values before quantization")
    n.add_argument("--pgm-format", choices=("p5", "p2"), default="p5")
    n.set_defaults(func=cmd_noisegen, clip=True)

    e = sub.add_parser("eval", help="PSNR and SSIM of a test image against a reference")
    e.add_argument("ref")
    e.add_argument("test")
    e.add_argument("--peak", type=float, default=255.0)
    e.add_argument("--report", default=None, help="JSON report path")
    e.set_defaults(func=cmd_eval)

    return parser


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _pipeline_config(args, looks=None):
    return {
        "patch_side": args.patch_side,
        "stride": args.stride,
        "n_atoms": args.n_atoms,
        "iterations": args.iterations,
        "max_atoms": args.max_atoms,
        "sigma": getattr(args, "sigma", None),
        "looks": looks,
        "error_gain": args.error_gain,
        "gamma": args.gamma,
        "truncation_mode": args.truncation_mode,
        "fixed_p": args.fixed_p,
        "remove_dc": args.remove_dc,
        "seed": args.seed,
    }


def _make_denoiser(args, sigma):
    if args.truncation_mode == "fixed-p" and args.fixed_p is None:
        raise ValueError("--truncation-mode fixed-p requires --fixed-p")
    return PrincipalBasisDenoiser(
        patch_side=args.patch_side,
        stride=args.stride,
        n_atoms=args.n_atoms,
        iterations=args.iterations,
        max_atoms=args.max_atoms,
        sigma=sigma,
        error_gain=args.error_gain,
        gamma=args.gamma,
        truncation_mode=args.truncation_mode,
        fixed_p=args.fixed_p,
        remove_dc=args.remove_dc,
        seed=args.seed,
    )


def _run_denoise_pipeline(args, command, sigma, looks=None, extra_derived=None):
    started = time.perf_counter()
    noisy = read_pgm(args.input)
    model = _make_denoiser(args, sigma)
    fit_started = time.perf_counter()
    model.fit(noisy)
    fit_done = time.perf_counter()
    restored = model.transform(noisy)
    transform_done = time.perf_counter()
    write_pgm(args.output, restored, binary=args.pgm_format == "p5")

    report = {
        "command": command,
        "input": args.input,
        "output": args.output,
        "config": _pipeline_config(args, looks=looks),
        "derived": {
            "gamma": model.gamma_,
            "error_tol": model.error_tol_,
            "n_patches": model.code_.n_samples,
            **(extra_derived or {}),
        },
        "result": {
            "n_atoms": model.dictionary_.n_atoms,
            "n_principal": model.n_principal_,
            "objective_trace": [float(v) for v in model.objective_trace_],
        },
    }
    if not args.no_timings:
        report["timings"] = {
            "fit_s": fit_done - fit_started,
            "transform_s": transform_done - fit_done,
            "total_s": time.perf_counter() - started,
        }
    if args.report:
        _write_json(args.report, report)
    print(f"{command}: wrote {args.output} "
          f"(P={model.n_principal_} of K={model.dictionary_.n_atoms})")


def cmd_denoise(args) -> None:
    _run_denoise_pipeline(args, "denoise", args.sigma)


def cmd_despeckle(args) -> None:
    if args.looks < 1:
        raise ValueError("--looks must be at least 1")
    noisy = read_pgm(args.input)
    sigma = equivalent_sigma(noisy, args.looks)
    _run_denoise_pipeline(
        args, "despeckle", sigma,
        looks=args.looks,
        extra_derived={"sigma_equivalent": sigma},
    )


def cmd_rank(args) -> None:
    started = time.perf_counter()
    image = read_pgm(args.input)
    model = _make_denoiser(args, args.sigma)
    model.fit(image)
    write_report_csv(model.report_rows(), args.csv)
    save_dictionary(model.dictionary_, args.dict_out)

    report = {
        "command": "rank",
        "input": args.input,
        "csv": args.csv,
        "dictionary": args.dict_out,
        "config": _pipeline_config(args),
        "derived": {
            "error_tol": model.error_tol_,
            "n_patches": model.code_.n_samples,
        },
        "result": {
            "n_atoms": model.dictionary_.n_atoms,
            "n_principal": model.n_principal_,
            "objective_trace": [float(v) for v in model.objective_trace_],
        },
    }
    if not args.no_timings:
        report["timings"] = {"total_s": time.perf_counter() - started}
    if args.report:
        _write_json(args.report, report)
    print(f"rank: P = {model.n_principal_} of K = {model.dictionary_.n_atoms}")


def cmd_noisegen(args) -> None:
    spec = NoiseSpec(
        kind=args.kind,
        sigma=args.sigma,
        looks=args.looks,
        seed=args.seed,
        clip=args.clip,
    )
    clean = read_pgm(args.input)
    noisy = apply_noise(clean, spec)
    write_pgm(args.output, noisy, binary=args.pgm_format == "p5")
    print(f"noisegen: wrote {args.output}")


def cmd_eval(args) -> None:
    ref = read_pgm(args.ref)
    test = read_pgm(args.test)
    cfg = MetricConfig(peak=args.peak)
    payload = {
        "command": "eval",
        "ref": args.ref,
        "test": args.test,
        "peak": args.peak,
        "psnr_db": psnr(ref, test, cfg),
        "ssim": ssim(ref, test, cfg),
    }
    print(f"PSNR: {payload['psnr_db']:.4f} dB")
    print(f"SSIM: {payload['ssim']:.6f}")
    if args.report:
        _write_json(args.report, payload)
    else:
        print(json.dumps(payload, sort_keys=True))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_thread_cap()
    try:
        args.func(args)
    except PgmError as exc:
        print(f"pba: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"pba: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PBAError, ValueError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"pba: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
