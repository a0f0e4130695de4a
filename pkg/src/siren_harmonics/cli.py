"""Command-line entry point.

Subcommands: expand, bound, width, init-freq, train, verify, experiment.
Exit codes: 0 success, 1 validation/usage error, 2 resource or
divergence error.  All randomness flows through --seed; identical seed
and flags (under the same kernel backend) reproduce output files byte
for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    EnumerationCapError,
    ParseError,
    SirenHarmonicsError,
    TrainingDivergedError,
    ValidationError,
)
from .expansion import (
    TruncationSpec,
    canonical_spectrum,
    expand_network,
    siren_amplitude_bound,
    spectrum_to_csv,
    spectrum_to_json,
)
from .initialization import (
    PeriodicInitSpec,
    least_squares_frequencies,
    periodic_first_layer,
    siren_init,
    target_spectrum_from_json,
    width_lower_bound,
)
from .model import FreezeMask, evaluate, load, save, serialize
from .training import (
    TrainOptions,
    fit,
    loss_history_to_csv,
    make_square_wave,
    make_twelve_sines,
    mse,
    sample_set_from_csv,
    sample_set_to_csv,
)
from .verification import (
    dft_of_network,
    empirical_spectrum_to_csv,
    gibbs_overshoot,
    max_bin_gap,
    periodicity_residual,
    square_wave_fourier_partial,
)

EXPERIMENT_NAMES = ("upper-bound-figure", "twelve-sines", "square-wave")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_index(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"index must be comma-joined integers, got {text!r}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _manifest(outdir: Path, config: dict, filenames: list[str]) -> None:
    checksums = {
        name: hashlib.sha256((outdir / name).read_bytes()).hexdigest() for name in filenames
    }
    payload = {"config": config, "version": __version__, "outputs": checksums}
    _write(outdir / "manifest.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_expand(args) -> int:
    net = load(args.network)
    spec = TruncationSpec(box_bound=args.box_bound, amplitude_floor=args.amplitude_floor)
    spectrum = expand_network(net, spec)
    if args.canonical:
        spectrum = canonical_spectrum(spectrum)
    if args.out_csv:
        _write(Path(args.out_csv), spectrum_to_csv(spectrum))
    if args.out_json:
        _write(Path(args.out_json), spectrum_to_json(spectrum))
    print(f"lines: {len(spectrum.lines)}")
    print(f"tail_bound: {spectrum.tail_bound!r}")
    return 0


def _cmd_bound(args) -> int:
    print(repr(siren_amplitude_bound(args.n, _parse_index(args.k))))
    return 0


def _cmd_width(args) -> int:
    print(width_lower_bound(args.K, args.B))
    return 0


def _cmd_init_freq(args) -> int:
    target = target_spectrum_from_json(Path(args.target).read_text(encoding="utf-8"))
    fitted = least_squares_frequencies(target, args.n, args.B)
    print("omega: " + " ".join(repr(float(w)) for w in fitted.omega))
    print(f"residual: {fitted.residual!r}")
    if fitted.phi is not None:
        print("phi: " + " ".join(repr(float(p)) for p in fitted.phi))
        print(f"phi_residual: {fitted.phi_residual!r}")
    if fitted.rank_deficient:
        print("warning: rank-deficient system; minimum-norm solution returned")
    if args.out:
        payload = {
            "omega": fitted.omega.tolist(),
            "residual": fitted.residual,
            "phi": None if fitted.phi is None else fitted.phi.tolist(),
            "phi_residual": fitted.phi_residual,
            "rank_deficient": fitted.rank_deficient,
        }
        _write(Path(args.out), json.dumps(payload, indent=2) + "\n")
    return 0


def _freeze_from_names(width: int, names: str) -> FreezeMask:
    groups = {name.strip() for name in names.split(",") if name.strip()}
    known = {"omega", "phi", "hidden_matrix", "hidden_bias", "linear_weights", "linear_bias"}
    unknown = groups - known
    if unknown:
        raise ValidationError(f"unknown freeze group(s): {', '.join(sorted(unknown))}")
    return FreezeMask.groups(width, **{name: True for name in groups})


def _cmd_train(args) -> int:
    data = sample_set_from_csv(Path(args.dataset).read_text(encoding="utf-8"))
    if args.network:
        net = load(args.network)
    elif args.init_width:
        lo, hi = (float(p) for p in args.omega_range.split(","))
        net = siren_init(args.init_width, args.seed, omega_range=(lo, hi))
    else:
        raise ValidationError("provide --network or --init-width")
    freeze = _freeze_from_names(net.width, args.freeze) if args.freeze else None
    opts = TrainOptions(
        steps=args.steps,
        learning_rate=args.learning_rate,
        adam_beta1=args.beta1,
        adam_beta2=args.beta2,
        adam_eps=args.eps,
        freeze=freeze,
        seed=args.seed,
    )
    trained, history = fit(net, data, opts)
    if args.out_network:
        save(trained, args.out_network)
    if args.out_loss:
        _write(Path(args.out_loss), loss_history_to_csv(history))
    print(f"final mse: {float(history[-1, 0])!r}")
    print(f"final l2: {float(history[-1, 1])!r}")
    return 0


def _cmd_verify(args) -> int:
    net = load(args.network)
    spec = TruncationSpec(box_bound=args.box_bound)
    analytic = canonical_spectrum(expand_network(net, spec))
    empirical = dft_of_network(net, args.period, sample_count=args.samples)
    gap = max_bin_gap(empirical, analytic)
    residual = periodicity_residual(net, args.period, seed=args.seed)
    print(f"max_bin_gap: {gap!r}")
    print(f"tail_bound: {analytic.tail_bound!r}")
    print(f"periodicity_residual: {residual!r}")
    if args.out_csv:
        _write(Path(args.out_csv), empirical_spectrum_to_csv(empirical))
    ok = gap <= args.tolerance + analytic.tail_bound
    print("spectrum check: " + ("ok" if ok else "MISMATCH"))
    return 0 if ok else 1


def _experiment_upper_bound(outdir: Path, config: dict) -> list[str]:
    n = config["n"]
    rows = []
    for i in range(config["max_entry"] + 1):
        index = (i,) + (0,) * (n - 1)
        rows.append((i, siren_amplitude_bound(n, index)))
    csv = "i;bound\n" + "\n".join(f"{i};{v!r}" for i, v in rows) + "\n"
    dat = "\n".join(f"{i} {v!r}" for i, v in rows) + "\n"
    _write(outdir / "bounds.csv", csv)
    _write(outdir / "bounds.dat", dat)
    return ["bounds.csv", "bounds.dat"]


def _experiment_twelve_sines(outdir: Path, config: dict) -> list[str]:
    variant = config["variant"]
    width = config["width"]
    seed = config["seed"]
    target, data = make_twelve_sines(variant)
    net = siren_init(width, seed, omega_range=(-5.0, 5.0))
    freeze = None
    if variant == 2:
        net = net.with_updates(omega=np.array([2.0 * math.pi, 46.0 * math.pi]))
        freeze = FreezeMask.groups(width, omega=True)
    elif variant == 3:
        frozen = [2.0 * math.pi, 22.0 * math.pi, 46.0 * math.pi][:width]
        net = net.with_updates(omega=np.array(frozen))
        freeze = FreezeMask.groups(width, omega=True)
    opts = TrainOptions(
        steps=config["steps"],
        learning_rate=config["learning_rate"],
        freeze=freeze,
        seed=seed,
    )
    trained, history = fit(net, data, opts)
    _write(outdir / "dataset.csv", sample_set_to_csv(data))
    _write(outdir / "loss.csv", loss_history_to_csv(history))
    save(trained, outdir / "network.json")
    metrics = {"final_mse": float(history[-1, 0]), "final_l2": float(history[-1, 1])}
    _write(outdir / "metrics.json", json.dumps(metrics, indent=2) + "\n")
    print(f"twelve-sines variant {variant} width {width}: l2={metrics['final_l2']:.3e}")
    return ["dataset.csv", "loss.csv", "network.json", "metrics.json"]


def _experiment_square_wave(outdir: Path, config: dict) -> list[str]:
    seed = config["seed"]
    data = make_square_wave(config["delta"])
    multipliers = (1, 3, 5, 7, 9)
    base = siren_init(len(multipliers), seed)
    net = base.with_updates(
        omega=periodic_first_layer(PeriodicInitSpec(period=2.0, integer_multipliers=multipliers))
    )
    freeze = FreezeMask.groups(net.width, omega=True)
    opts = TrainOptions(
        steps=config["steps"],
        learning_rate=config["learning_rate"],
        freeze=freeze,
        seed=seed,
    )
    trained, history = fit(net, data, opts)
    fourier_terms = config["fourier_terms"]
    net_overshoot = gibbs_overshoot(lambda xs: evaluate(trained, xs), 0.0, -0.5)
    fourier_overshoot = gibbs_overshoot(
        lambda xs: square_wave_fourier_partial(fourier_terms, xs), 0.0, -0.5
    )
    residual = periodicity_residual(trained, 2.0, seed=seed)
    _write(outdir / "dataset.csv", sample_set_to_csv(data))
    _write(outdir / "loss.csv", loss_history_to_csv(history))
    save(trained, outdir / "network.json")
    grid = np.linspace(-1.0, 1.0, 2001)
    curves = "x;network;fourier\n" + "\n".join(
        f"{float(x)!r};{float(ynet)!r};{float(yf)!r}"
        for x, ynet, yf in zip(
            grid, evaluate(trained, grid), square_wave_fourier_partial(fourier_terms, grid)
        )
    ) + "\n"
    _write(outdir / "curves.csv", curves)
    metrics = {
        "final_mse": float(history[-1, 0]),
        "final_l2": float(history[-1, 1]),
        "network_overshoot": net_overshoot,
        "fourier_overshoot": fourier_overshoot,
        "fourier_terms": fourier_terms,
        "periodicity_residual": residual,
    }
    _write(outdir / "metrics.json", json.dumps(metrics, indent=2) + "\n")
    print(
        f"square-wave: mse={metrics['final_mse']:.3e} "
        f"overshoot={net_overshoot:.4f} (fourier {fourier_overshoot:.4f})"
    )
    return ["dataset.csv", "loss.csv", "network.json", "curves.csv", "metrics.json"]


def _cmd_experiment(args) -> int:
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.name == "upper-bound-figure":
        config = {"name": args.name, "n": 32, "max_entry": 7, "seed": args.seed or 0}
        files = _experiment_upper_bound(outdir, config)
    elif args.name == "twelve-sines":
        variant = args.variant or 1
        width = args.width or (3 if variant == 3 else 2)
        config = {
            "name": args.name,
            "variant": variant,
            "width": width,
            "seed": args.seed if args.seed is not None else (4 if variant == 1 else 0),
            "steps": args.steps,
            "learning_rate": args.learning_rate or (1e-3 if variant == 1 else 1e-2),
        }
        files = _experiment_twelve_sines(outdir, config)
    else:
        config = {
            "name": args.name,
            "delta": 0.02,
            "seed": args.seed if args.seed is not None else 1,
            "steps": args.steps,
            "learning_rate": args.learning_rate or 1e-3,
            "fourier_terms": 46,
        }
        files = _experiment_square_wave(outdir, config)
    _manifest(outdir, config, files)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="siren-harmonics", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="network JSON -> spectrum CSV/JSON with tail bound")
    p.add_argument("--network", required=True)
    p.add_argument("--box-bound", type=int, required=True)
    p.add_argument("--amplitude-floor", type=float, default=None)
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("bound", help="width-n SIREN amplitude bound at index k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", required=True, help="comma-joined integers")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("width", help="width lower bound for K frequencies at box bound B")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.set_defaults(func=_cmd_width)

    p = sub.add_parser("init-freq", help="least-squares first-layer frequencies for a target")
    p.add_argument("--target", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_init_freq)

    p = sub.add_parser("train", help="fit a network to a dataset CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--network", default=None)
    p.add_argument("--init-width", type=int, default=None)
    p.add_argument("--omega-range", default="-30,30")
    p.add_argument("--steps", type=int, default=20_000)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--beta1", type=float, default=0.9)
    p.add_argument("--beta2", type=float, default=0.999)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--freeze", default=None, help="comma-joined parameter group names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-network", default=None)
    p.add_argument("--out-loss", default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("verify", help="DFT vs analytic spectrum report for a periodic network")
    p.add_argument("--network", required=True)
    p.add_argument("--period", type=float, required=True)
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--box-bound", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="run a named experiment and write its data files")
    p.add_argument("--name", required=True, choices=EXPERIMENT_NAMES)
    p.add_argument("--variant", type=int, choices=(1, 2, 3), default=None)
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--steps", type=int, default=20_000)
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except (ValidationError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EnumerationCapError, TrainingDivergedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SirenHarmonicsError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
