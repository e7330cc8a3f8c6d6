"""Command-line pipeline: generate | landscape | band | classify | rank.

Every command is a pure function of (input files, flags, --seed): reruns are
byte-identical, at any --threads setting.  Exit codes: 0 success, 2
validation error, 3 I/O error, 4 internal error.
"""

import argparse
import os
import sys

from . import bands as bands_mod
from . import classify as classify_mod
from ._seeding import derive_seed
from .bifiltration import build_rips_codensity, load_bifiltration, normalize
from .landscape import (Grid, compute_landscape, compute_landscape_1p,
                        export_landscape_csv, load_landscape_grid,
                        rank_invariant, save_landscape_grid)
from .pointcloud import (add_gaussian_noise, add_salt_pepper_noise,
                         gaussian_kde, read_pointcloud_csv, sample_klein_bottle,
                         sample_sphere, sample_torus, scott_bandwidth,
                         write_pointcloud_csv)

__all__ = ["main", "build_parser"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="landbands",
        description="Persistence landscapes of Rips-codensity bifiltrations, "
                    "bootstrap confidence bands, and band-depth classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p):
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap for per-diagonal slice reductions")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("generate", help="sample noisy synthetic shape clouds")
    shared(p)
    p.add_argument("--shape", required=True, choices=("sphere", "torus", "klein"))
    p.add_argument("--N", type=int, default=500, help="points per cloud")
    p.add_argument("--R", type=float, default=3.0, help="sphere/torus main radius")
    p.add_argument("--r", type=float, default=0.7, help="torus tube radius")
    p.add_argument("--sigma", type=float, default=0.1, help="Gaussian noise scale")
    p.add_argument("--salt-fraction", type=float, default=0.005,
                   help="fraction of points to displace")
    p.add_argument("--max-disp", type=float, default=0.5,
                   help="salt displacement radius")
    p.add_argument("--samples", type=int, default=1, help="number of clouds")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("landscape", help="cloud CSVs to landscape grid documents")
    shared(p)
    p.add_argument("inputs", nargs="+", help="point-cloud CSV files")
    p.add_argument("--mode", choices=("mph", "sph"), default="mph",
                   help="bifiltration landscape (mph) or plain Rips (sph)")
    p.add_argument("--degree", type=int, default=1, help="homology degree")
    p.add_argument("--k", type=int, default=1, help="landscape level")
    p.add_argument("--T", type=float, default=1.0, help="grading box bound")
    p.add_argument("--m", type=int, default=50, help="grid resolution per axis")
    p.add_argument("--max-scale", type=float, default=None,
                   help="Rips scale cutoff (default: cloud diameter)")
    p.add_argument("--max-dim", type=int, default=2, help="top simplex dimension")
    p.add_argument("--bandwidth", type=float, default=None,
                   help="KDE bandwidth (default: Scott's rule)")
    p.add_argument("--csv", action="store_true", help="also export plotting CSVs")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("band", help="bootstrap confidence band from grid files")
    shared(p)
    p.add_argument("inputs", nargs="+", help="landscape grid documents")
    p.add_argument("--method", choices=("standard", "multiplier"),
                   default="multiplier")
    p.add_argument("--B", type=int, default=1000, help="bootstrap replicates")
    p.add_argument("--alpha", type=float, default=0.05, help="1 - confidence level")
    p.add_argument("--scale-half", action="store_true",
                   help="scale standard-bootstrap deviations by sqrt(n/2)")
    p.add_argument("--clamp-zero", action="store_true",
                   help="cut the lower band at 0")
    p.add_argument("--dump-theta", action="store_true",
                   help="also write the bootstrap statistics theta.txt")
    p.add_argument("--csv", action="store_true", help="also export plotting CSV")
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("classify", help="cross-validate the band-depth classifier")
    shared(p)
    p.add_argument("--class", dest="classes", action="append", required=True,
                   metavar="LABEL=DIR",
                   help="class label and directory of .grid files (repeatable)")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--method", choices=("standard", "multiplier"),
                   default="standard")
    p.add_argument("--B", type=int, default=1000, help="bootstrap replicates")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--scale-half", action="store_true")
    p.add_argument("--clamp-zero", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rank", help="rank invariant of a bifiltration file")
    shared(p)
    p.add_argument("input", help="bifiltration text file")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--x", type=_bigrade, required=True, metavar="a,b")
    p.add_argument("--y", type=_bigrade, required=True, metavar="c,d")
    p.set_defaults(func=cmd_rank)

    return parser


def _bigrade(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("bigrade must be two comma-separated reals")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError("bigrade components must be numbers") from None


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args):
    out = _outdir(args)
    for i in range(args.samples):
        sample_seed = derive_seed(args.seed, "generate", i)
        if args.shape == "sphere":
            cloud = sample_sphere(args.N, args.R, sample_seed)
        elif args.shape == "torus":
            cloud = sample_torus(args.N, args.R, args.r, sample_seed)
        else:
            cloud = sample_klein_bottle(args.N, sample_seed)
        cloud = add_gaussian_noise(cloud, args.sigma, sample_seed)
        cloud = add_salt_pepper_noise(cloud, args.salt_fraction, args.max_disp,
                                      sample_seed)
        write_pointcloud_csv(os.path.join(out, f"{args.shape}_{i:03d}.csv"), cloud)
    return 0


def cmd_landscape(args):
    out = _outdir(args)
    for path in args.inputs:
        cloud, _ = read_pointcloud_csv(path)
        stem = os.path.splitext(os.path.basename(path))[0]
        if args.mode == "mph":
            h = args.bandwidth if args.bandwidth is not None else scott_bandwidth(cloud)
            density = gaussian_kde(cloud, h)
            bif = build_rips_codensity(cloud, density, max_scale=args.max_scale,
                                       max_dim=args.max_dim)
            bif = normalize(bif, args.T)
            grid = Grid(T=args.T, m=args.m, d=2)
            lg = compute_landscape(bif, args.degree, args.k, grid,
                                   threads=args.threads)
        else:
            grid = Grid(T=args.T, m=args.m, d=1)
            lg = compute_landscape_1p(cloud, args.degree, args.k, grid,
                                      max_scale=args.max_scale)
        save_landscape_grid(os.path.join(out, f"{stem}.grid"), lg)
        if args.csv:
            export_landscape_csv(os.path.join(out, f"{stem}.csv"), lg)
    return 0


def cmd_band(args):
    out = _outdir(args)
    landscapes = [load_landscape_grid(path) for path in args.inputs]
    band = bands_mod.bootstrap_band(landscapes, args.method, args.B, args.alpha,
                                    args.seed, scale_half=args.scale_half,
                                    clamp_zero=args.clamp_zero)
    bands_mod.save_band(os.path.join(out, "band.txt"), band)
    if args.csv:
        bands_mod.export_band_csv(os.path.join(out, "band.csv"), band)
    if args.dump_theta:
        thetas = bands_mod.bootstrap_thetas(landscapes, args.method, args.B,
                                            args.seed, scale_half=args.scale_half)
        with open(os.path.join(out, "theta.txt"), "w", encoding="utf-8") as fh:
            for theta in thetas:
                fh.write(f"{theta:.17g}\n")
    print(f"z_tilde={band.z_tilde:.17g} n={band.n}")
    return 0


def cmd_classify(args):
    out = _outdir(args)
    samples = {}
    for spec_text in args.classes:
        label, sep, directory = spec_text.partition("=")
        if not sep or not label or not directory:
            raise ValueError(f"--class expects LABEL=DIR, got {spec_text!r}")
        paths = sorted(fn for fn in os.listdir(directory) if fn.endswith(".grid"))
        if not paths:
            raise ValueError(f"class {label!r}: no .grid files in {directory}")
        samples[label] = [load_landscape_grid(os.path.join(directory, fn))
                          for fn in paths]
    report = classify_mod.cross_validate_report(
        samples, args.folds, args.method, args.B, args.alpha, args.seed,
        scale_half=args.scale_half, clamp_zero=args.clamp_zero)
    classify_mod.save_results(os.path.join(out, "results.txt"), report)
    classify_mod.save_confusion_csv(os.path.join(out, "confusion.csv"), report)
    print(f"accuracy {report.mean_accuracy:.2f} ± {report.sd_accuracy:.2f}")
    return 0


def cmd_rank(args):
    bif = load_bifiltration(args.input)
    value = rank_invariant(bif, args.degree, args.x, args.y)
    print(value)
    return 0


# ---------------------------------------------------------------------------


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
