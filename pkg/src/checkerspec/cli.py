"""Command-line entry point: synth, enhance, train, infer, eval.

Exit codes: 0 success, 1 data/domain error, 2 usage error. Results go to
stdout; diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import classifier as clf
from .enhance import (DEFAULT_CROP_COUNT, DEFAULT_CROP_SIZE, DEFAULT_EPSILON, centered,
                      enhance_image, write_esp)
from .ensemble import ScorePair, combine
from .errors import CheckerspecError, UndefinedMetricError
from .metrics import evaluate
from .pnm import encode_pgm, read_image
from .synthgen import SynthConfig, build_dataset, read_manifest

log = logging.getLogger("checkerspec")


def _bool(raw: str) -> bool:
    if raw.lower() in ("1", "true", "yes", "on"):
        return True
    if raw.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


class UsageError(Exception):
    pass


DEFAULTS = {
    "crop_size": DEFAULT_CROP_SIZE,
    "crops": DEFAULT_CROP_COUNT,
    "epsilon": DEFAULT_EPSILON,
    "seed": 0,
    "lr": clf.TrainConfig.learning_rate,
    "epochs": clf.TrainConfig.epochs,
    "batch_size": clf.TrainConfig.batch_size,
    "l2": clf.TrainConfig.l2,
    "mode": "spectrum",
    "real": 100,
    "fake": 100,
    "size": 256,
    "factor": 2,
    "octaves": 5,
    "threshold": 0.5,
}

CASTS = {
    "crop_size": int, "crops": int, "epsilon": float, "seed": int, "lr": float, "epochs": int,
    "batch_size": int, "l2": float, "real": int, "fake": int, "size": int, "factor": int,
    "octaves": int, "threshold": float, "ensemble": _bool,
}



def read_config(path) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        out[key] = value
    return out


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from --config, then from DEFAULTS. Flags win."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in vars(args).items():
        if value is not None:
            continue
        if key in cfg:
            raw = cfg[key]
            try:
                setattr(args, key, CASTS[key](raw) if key in CASTS else raw)
            except ValueError:
                raise UsageError(f"bad value for {key}: {raw!r}") from None
        elif key in DEFAULTS:
            setattr(args, key, DEFAULTS[key])
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, [], ""):
            raise UsageError(f"missing required option --{name.replace('_', '-')}")


def _add_enhance_flags(p):
    p.add_argument("--crop-size", type=int, help="crop side N (default 64)")
    p.add_argument("--crops", type=int, help="crop count L (default 16)")
    p.add_argument("--epsilon", type=float, help="log floor (default 1e-12)")
    p.add_argument("--seed", type=int, help="crop/shuffle seed (default 0)")


def _add_common(p):
    p.add_argument("--config", help="key=value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="checkerspec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic real/fake dataset")
    _add_common(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--real", type=int)
    p.add_argument("--fake", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--size", type=int, help="image side (default 256)")
    p.add_argument("--factor", type=int, help="upsample factor of fakes (default 2)")
    p.add_argument("--octaves", type=int, help="value-noise octaves (default 5)")

    p = sub.add_parser("enhance", help="compute the enhanced spectrum of one image")
    _add_common(p)
    p.add_argument("image")
    p.add_argument("--out", help="output .esp path")
    p.add_argument("--dump", help="optional center-shifted PGM visualization")
    _add_enhance_flags(p)

    p = sub.add_parser("train", help="train a detector from a manifest")
    _add_common(p)
    p.add_argument("--manifest")
    p.add_argument("--out", help="model file to write")
    p.add_argument("--mode", choices=clf.SOURCES)
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--l2", type=float)
    _add_enhance_flags(p)

    for name, helptext in (("infer", "score images"), ("eval", "score a labeled manifest")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "infer":
            p.add_argument("images", nargs="+")
        else:
            p.add_argument("--manifest")
            p.add_argument("--pr-csv", help="write the PR curve here")
            p.add_argument("--threshold", type=float)
        p.add_argument("--model", help="spectrum model (or any single model)")
        p.add_argument("--pixel-model", help="pixel-domain baseline model")
        p.add_argument("--ensemble", action="store_true", default=None,
                       help="combine --pixel-model and --model scores")
        _add_enhance_flags(p)
    return parser


def _features(img, source, args):
    if source == "pixel":
        return clf.pixel_features(img)
    spec = enhance_image(img, args.crop_size, args.crops, args.seed, args.epsilon)
    return clf.flatten_spectrum(spec)


def _load_detectors(args):
    """Return ``(spectrum_or_single_model, pixel_model_or_None)``."""
    if args.ensemble:
        _require(args, "model", "pixel_model")
        spec_model = clf.read_model(args.model)
        pix_model = clf.read_model(args.pixel_model)
        if spec_model.source != "spectrum" or pix_model.source != "pixel":
            raise CheckerspecError("--model must be a spectrum model and --pixel-model a pixel model")
        return spec_model, pix_model
    if not args.model and not args.pixel_model:
        raise UsageError("need --model or --pixel-model")
    return clf.read_model(args.model or args.pixel_model), None


def _score_image(img, model, pix_model, args):
    """Single: ``(r,)``. Ensemble: ``(r_I, r_F, r)``."""
    r_f = clf.score(model, _features(img, model.source, args))
    if pix_model is None:
        return (r_f,)
    r_i = clf.score(pix_model, _features(img, "pixel", args))
    return r_i, r_f, combine(ScorePair(r_i, r_f))


def cmd_synth(args) -> int:
    _require(args, "out")
    cfg = SynthConfig(image_size=args.size, upsample_factor=args.factor, noise_octaves=args.octaves,
                      count_real=args.real, count_fake=args.fake, seed=args.seed)
    manifest = build_dataset(cfg, args.out)
    log.info("wrote %d images to %s (config %s)", len(manifest.entries), args.out, manifest.config_digest[:12])
    return 0


def cmd_enhance(args) -> int:
    _require(args, "out")
    spec = enhance_image(read_image(args.image), args.crop_size, args.crops, args.seed, args.epsilon)
    write_esp(args.out, spec)
    if args.dump:
        view = centered(spec)
        lo, hi = float(view.values.min()), float(view.values.max())
        if hi <= lo:
            hi = lo + 1.0
        Path(args.dump).write_bytes(encode_pgm(view, lo, hi))
    return 0


def cmd_train(args) -> int:
    _require(args, "manifest", "out")
    manifest = read_manifest(args.manifest)
    if len(set(manifest.labels)) < 2:
        raise CheckerspecError(f"{args.manifest}: training needs both labels")
    feats = [_features(read_image(p), args.mode, args) for p in manifest.paths]
    cfg = clf.TrainConfig(learning_rate=args.lr, epochs=args.epochs, batch_size=args.batch_size,
                          l2=args.l2, seed=args.seed)
    model, history = clf.train_with_history(feats, manifest.labels, cfg)
    clf.write_model(args.out, model)
    log.info("loss %.6f -> %.6f over %d epochs", history[0], history[-1], cfg.epochs)
    print(f"loss={history[-1]:.6f}")
    return 0


def cmd_infer(args) -> int:
    model, pix_model = _load_detectors(args)
    status = 0
    for path in args.images:
        try:
            scores = _score_image(read_image(path), model, pix_model, args)
        except (CheckerspecError, OSError) as e:
            print(f"{path}: error: {e}", file=sys.stderr)
            status = 1
            continue
        print(path, " ".join(f"{s:.6f}" for s in scores))
    return status


def cmd_eval(args) -> int:
    _require(args, "manifest")
    model, pix_model = _load_detectors(args)
    manifest = read_manifest(args.manifest)
    if 1 not in manifest.labels:
        raise UndefinedMetricError(f"{args.manifest}: no positive (label 1) entries")
    scores = np.array([_score_image(read_image(p), model, pix_model, args)[-1] for p in manifest.paths])
    report = evaluate(scores, manifest.labels, args.threshold)
    print(report.format_line())
    print(report.format_percent(), file=sys.stderr)
    if args.pr_csv:
        Path(args.pr_csv).write_text(report.pr_csv())
    return 0


COMMANDS = {"synth": cmd_synth, "enhance": cmd_enhance, "train": cmd_train,
            "infer": cmd_infer, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        _resolve(args)
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"checkerspec {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (CheckerspecError, OSError, ValueError) as e:
        print(f"checkerspec {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
