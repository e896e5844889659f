"""Command-line entry point: ``xgewfi {generate,evaluate,run,version}``.

Exit codes: 0 success, 1 configuration/usage error, 2 data error,
3 I/O error.
"""
import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corrupt import CorruptConfig
from .dataset import Kind, save_csv
from .errors import ConfigError, DataError, StageError
from .forest import ForestConfig, MaxFeatures
from .impute import ImputeConfig
from .pipeline import Evaluate, PipelineConfig, run, stage_seed
from .report import SCHEMA_VERSION
from .smote import AugmentConfig
from .synthgen import GenConfig, generate

EXIT_CONFIG, EXIT_DATA, EXIT_IO = 1, 2, 3

DEFAULTS = {
    "kind": "regression",
    "seed": 1,
    "n_samples": 25000,
    "n_features": 5,
    "n_informative": None,
    "n_classes": 2,
    "shuffle": True,
    "noise": 0.0,
    "outlier_rate": 0.05,
    "missing_rate": 0.30,
    "outlier_magnitude": 6.0,
    "k_impute": 5,
    "k_augment": 5,
    "target_ratio": None,
    "n_trees": 100,
    "max_depth": None,
    "min_samples_split": 2,
    "max_features": None,
    "bootstrap": True,
    "evaluate": "imputation",
    "out_dir": "xgewfi_out",
    "percent": False,
}
CORRUPT_KEYS = ("outlier_rate", "missing_rate", "outlier_magnitude", "corrupt_seed")


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _gen_flags(p):
    S = argparse.SUPPRESS
    g = p.add_argument_group("dataset generation")
    g.add_argument("--kind", choices=[k.value for k in Kind], default=S)
    g.add_argument("--n-samples", type=int, default=S)
    g.add_argument("--n-features", type=int, default=S)
    g.add_argument("--n-informative", type=int, default=S)
    g.add_argument("--n-classes", type=int, default=S)
    g.add_argument("--no-shuffle", dest="shuffle", action="store_false", default=S)
    g.add_argument("--random-state", type=int, default=S,
                   help="generator seed (defaults to --seed)")
    g.add_argument("--noise", type=float, default=S)


def _pipeline_flags(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", type=Path, help="JSON file of flag values; flags win")
    p.add_argument("--seed", type=int, default=S, help="master seed for every stage")
    p.add_argument("--out-dir", default=S)
    p.add_argument("--evaluate", choices=[e.value for e in Evaluate], default=S)
    p.add_argument("--percent", action="store_true", default=S,
                   help="display weighted errors multiplied by 100")
    c = p.add_argument_group("corruption")
    c.add_argument("--corrupt", dest="corrupt", action="store_true", default=S)
    c.add_argument("--no-corrupt", dest="corrupt", action="store_false", default=S)
    c.add_argument("--outlier-rate", type=float, default=S)
    c.add_argument("--missing-rate", type=float, default=S)
    c.add_argument("--outlier-magnitude", type=float, default=S)
    c.add_argument("--corrupt-seed", type=int, default=S)
    i = p.add_argument_group("imputation / augmentation")
    i.add_argument("--k-impute", type=int, default=S)
    i.add_argument("--k-augment", type=int, default=S)
    i.add_argument("--target-ratio", type=float, default=S)
    i.add_argument("--augment-seed", type=int, default=S)
    f = p.add_argument_group("forest")
    f.add_argument("--n-trees", type=int, default=S)
    f.add_argument("--max-depth", type=int, default=S)
    f.add_argument("--min-samples-split", type=int, default=S)
    f.add_argument("--max-features", choices=[m.value for m in MaxFeatures], default=S)
    f.add_argument("--no-bootstrap", dest="bootstrap", action="store_false", default=S)
    f.add_argument("--forest-seed", type=int, default=S)


def build_parser():
    parser = Parser(prog="xgewfi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    g = sub.add_parser("generate", help="write a clean synthetic dataset to CSV")
    g.add_argument("out", type=Path)
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    _gen_flags(g)

    e = sub.add_parser("evaluate", help="run the pipeline on an existing CSV")
    e.add_argument("dataset", type=Path)
    e.add_argument("--kind", choices=[k.value for k in Kind], default=argparse.SUPPRESS)
    _pipeline_flags(e)

    r = sub.add_parser("run", help="generate a dataset and run the whole pipeline")
    _gen_flags(r)
    _pipeline_flags(r)

    sub.add_parser("version", help="print package and report schema versions")
    return parser


def _merge(args):
    given = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    from_file = {}
    if getattr(args, "config", None) is not None:
        try:
            from_file = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {args.config}: {exc}") from None
        if not isinstance(from_file, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(from_file) - set(DEFAULTS) - set(CORRUPT_KEYS) - {
            "corrupt", "random_state", "augment_seed", "forest_seed"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return {**DEFAULTS, **from_file, **given}, {**from_file, **given}


def gen_config(opts):
    return GenConfig(
        n_samples=opts["n_samples"],
        n_features=opts["n_features"],
        n_informative=opts["n_informative"],
        n_classes=opts["n_classes"],
        shuffle=opts["shuffle"],
        random_state=opts.get("random_state", opts["seed"]),
        noise=opts["noise"],
    )


def pipeline_config(opts, explicit, command, dataset=None):
    """Translate merged option values into a :class:`PipelineConfig`."""
    master = opts["seed"]
    if "corrupt" in explicit:
        corrupt_on = explicit["corrupt"]
    else:
        corrupt_on = command == "run" or any(k in explicit for k in CORRUPT_KEYS)
    corrupt = None
    if corrupt_on:
        corrupt = CorruptConfig(
            outlier_rate=opts["outlier_rate"],
            missing_rate=opts["missing_rate"],
            outlier_magnitude=opts["outlier_magnitude"],
            seed=opts.get("corrupt_seed", stage_seed(master, "corrupt")),
        )
    evaluate = Evaluate(opts["evaluate"])
    augment = None
    if evaluate is not Evaluate.IMPUTATION or opts["target_ratio"] is not None:
        augment = AugmentConfig(
            k=opts["k_augment"],
            target_ratio=2.0 if opts["target_ratio"] is None else opts["target_ratio"],
            seed=opts.get("augment_seed", stage_seed(master, "augment")),
        )
    forest = ForestConfig(
        n_trees=opts["n_trees"],
        max_depth=opts["max_depth"],
        min_samples_split=opts["min_samples_split"],
        max_features=None if opts["max_features"] is None else MaxFeatures(opts["max_features"]),
        bootstrap=opts["bootstrap"],
        seed=opts.get("forest_seed", stage_seed(master, "forest")),
    )
    return PipelineConfig(
        kind=Kind.parse(opts["kind"]),
        generate=gen_config(opts) if dataset is None else None,
        load=None if dataset is None else str(dataset),
        corrupt=corrupt,
        impute=ImputeConfig(k=opts["k_impute"]),
        augment=augment,
        forest=forest,
        evaluate=evaluate,
        out_dir=opts["out_dir"],
        percent_display=opts["percent"],
        master_seed=master,
    )


def print_summary(bundle, percent, stream=None):
    stream = stream or sys.stdout
    scale = 100.0 if percent else 1.0
    for mode, sec in bundle.report["scores"].items():
        print(f"== {mode} ==", file=stream)
        print(f"{'feature':<12}{'importance':>12}{'KS error':>12}{'weighted':>12}", file=stream)
        for row in sec["features"]:
            print(f"{row['feature']:<12}{row['importance']:>12.4f}{row['ks_error']:>12.4f}"
                  f"{row['weighted_error'] * scale:>12.4f}", file=stream)
        print(f"KS global error: {sec['ks_global']:.4f}", file=stream)
        print(f"xGEWFI:          {sec['xgewfi'] * scale:.4f}", file=stream)
    print(f"report written to {bundle.json_path}", file=stream)


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    if isinstance(cause, ConfigError):
        return EXIT_CONFIG
    if isinstance(cause, DataError):
        return EXIT_DATA
    if isinstance(cause, OSError):
        return EXIT_IO
    return EXIT_DATA


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(f"xgewfi {__version__} (report schema {SCHEMA_VERSION})")
        return 0
    try:
        opts, explicit = _merge(args)
        if args.command == "generate":
            ds = generate(gen_config(opts), Kind.parse(opts["kind"]))
            save_csv(ds, args.out)
            print(f"wrote {ds.n_samples}x{ds.n_features} {ds.kind.value} dataset to {args.out}")
            return 0
        dataset = args.dataset if args.command == "evaluate" else None
        cfg = pipeline_config(opts, explicit, args.command, dataset)
        bundle = run(cfg)
        print_summary(bundle, cfg.percent_display)
        return 0
    except (ConfigError, DataError, StageError, OSError) as exc:
        print(f"xgewfi: error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
