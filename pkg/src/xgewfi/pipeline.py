"""End-to-end run: input -> corruption -> outliers -> imputation ->
augmentation -> forest importances -> per-feature KS -> xGEWFI -> report.
"""
import datetime as _dt
import enum
import platform
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .corrupt import CorruptConfig, corrupt
from .dataset import Kind, load_csv
from .errors import ConfigError, StageError, XgewfiError
from .forest import ForestConfig, feature_importances, train
from .impute import ImputeConfig, impute
from .ks import KsResult, ks_two_sample
from .metric import rank_features, score
from .outliers import null_outliers
from .report import boxplot_svg, combined_chart_svg, histogram_svg, json_report, latex_tables
from .report.json_report import SCHEMA_VERSION, build_report, scores_section
from .rng import derive_seed
from .smote import AugmentConfig, augment
from .synthgen import GenConfig, generate

FOREST_TABLE = "imputed, pre-augmentation"


class Evaluate(str, enum.Enum):
    IMPUTATION = "imputation"
    AUGMENTATION = "augmentation"
    BOTH = "both"

    @property
    def modes(self):
        if self is Evaluate.BOTH:
            return ["imputation", "augmentation"]
        return [self.value]


@dataclass(frozen=True)
class PipelineConfig:
    kind: Kind = Kind.REGRESSION
    generate: Optional[GenConfig] = None
    load: Optional[str] = None
    corrupt: Optional[CorruptConfig] = None
    impute: ImputeConfig = field(default_factory=ImputeConfig)
    augment: Optional[AugmentConfig] = None
    forest: ForestConfig = field(default_factory=ForestConfig)
    evaluate: Evaluate = Evaluate.IMPUTATION
    out_dir: str = "xgewfi_out"
    percent_display: bool = False
    master_seed: int = 1

    def validate(self):
        if (self.generate is None) == (self.load is None):
            raise ConfigError("exactly one of generate/load must be given")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if self.evaluate in (Evaluate.AUGMENTATION, Evaluate.BOTH) and self.augment is None:
            raise ConfigError("evaluating augmentation needs an augmentation config")
        self.impute.validate()
        self.forest.validate()
        if self.corrupt is not None:
            self.corrupt.validate()
        if self.augment is not None:
            self.augment.validate()
        if self.generate is not None:
            self.generate.validate(self.kind)

    def seeds(self):
        return {
            "generate": self.generate.random_state if self.generate else None,
            "corrupt": self.corrupt.seed if self.corrupt else None,
            "augment": self.augment.seed if self.augment else None,
            "forest": self.forest.seed,
        }

    def to_json(self):
        def clean(obj):
            if isinstance(obj, enum.Enum):
                return obj.value
            if isinstance(obj, dict):
                return {k: clean(v) for k, v in obj.items()}
            return obj

        return clean({
            "kind": self.kind,
            "input": ({"generate": asdict(self.generate)} if self.generate
                      else {"load": str(self.load)}),
            "corrupt": asdict(self.corrupt) if self.corrupt else None,
            "impute": asdict(self.impute),
            "augment": asdict(self.augment) if self.augment else None,
            "forest": asdict(self.forest),
            "evaluate": self.evaluate,
            "percent_display": self.percent_display,
            "master_seed": self.master_seed,
        })


def stage_seed(master, stage):
    return derive_seed(master, stage)


def default_config(kind=Kind.REGRESSION, master_seed=1, **overrides):
    """Config whose stage seeds are all derived from ``master_seed``."""
    cfg = PipelineConfig(
        kind=Kind.parse(kind),
        master_seed=master_seed,
        corrupt=CorruptConfig(seed=stage_seed(master_seed, "corrupt")),
        forest=ForestConfig(seed=stage_seed(master_seed, "forest")),
    )
    if "generate" not in overrides and "load" not in overrides:
        overrides["generate"] = GenConfig(random_state=master_seed)
    return replace(cfg, **overrides)


@dataclass(frozen=True)
class ReportBundle:
    json_path: Path
    latex_results_path: Path
    latex_explain_path: Path
    svg_paths: tuple
    report: dict = field(repr=False)

    @property
    def paths(self):
        return [self.json_path, self.latex_results_path, self.latex_explain_path,
                *self.svg_paths]


class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, (XgewfiError, OSError)) \
                and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def imputation_slices(nulled, imputed, f):
    """Observed values of feature ``f`` and the values imputed for it."""
    miss = nulled.missing[:, f]
    return nulled.values[~miss, f], imputed.values[miss, f]


def augmentation_slices(before, after, f):
    """Pre-augmentation column ``f`` and the synthetic rows' values."""
    return before.values[:, f], after.values[before.n_samples:, f]


def _ks(original, generated):
    if generated.size == 0:
        return KsResult(0.0, 1.0, int(original.size), 0)
    return ks_two_sample(original, generated)


def run(config, now=None):
    config.validate()
    out = Path(config.out_dir)
    with _Stage("input"):
        if config.generate is not None:
            raw = generate(config.generate, config.kind)
        else:
            raw = load_csv(config.load, config.kind)
    names = raw.feature_names
    with _Stage("corrupt"):
        if config.corrupt is not None:
            raw, _ = corrupt(raw, config.corrupt)
    with _Stage("outliers"):
        nulled, outlier_summary = null_outliers(raw)
    modes = config.evaluate.modes
    with _Stage("imputation"):
        if "imputation" in modes and not nulled.missing.any():
            raise ConfigError("nothing to impute: the dataset has no missing cells")
        imputed, impute_summary = impute(nulled, config.impute)
    with _Stage("augmentation"):
        aug_cfg = config.augment or AugmentConfig(k=config.impute.k, target_ratio=1.0,
                                                  seed=stage_seed(config.master_seed, "augment"))
        augmented, aug_summary = augment(imputed, aug_cfg)
        if "augmentation" in modes and aug_summary.n_generated == 0:
            raise ConfigError("nothing to evaluate: augmentation generated no rows")
    with _Stage("forest"):
        forest = train(imputed, config.forest)
        weights = feature_importances(forest)

    evaluations = {}
    with _Stage("evaluation"):
        for mode in modes:
            ks = []
            slices = []
            for f in range(raw.n_features):
                if mode == "imputation":
                    o, g = imputation_slices(nulled, imputed, f)
                else:
                    o, g = augmentation_slices(imputed, augmented, f)
                ks.append(_ks(o, g))
                slices.append((o, g))
            scores, globals_ = score(weights, ks)
            evaluations[mode] = (ks, scores, globals_, slices)

    with _Stage("report"):
        out.mkdir(parents=True, exist_ok=True)
        svgs = [out / "boxplot.svg"]
        boxplot_svg(raw, svgs[0])
        tex = {}
        for mode, (ks, scores, globals_, slices) in evaluations.items():
            d = out if len(modes) == 1 else out / mode
            d.mkdir(parents=True, exist_ok=True)
            tex[mode] = (d / "results.tex", d / "explain.tex")
            latex_tables(scores, globals_, *tex[mode], names=names, percent=True)
            for f, (o, g) in enumerate(slices):
                if g.size:
                    p = d / f"hist_{f}.svg"
                    histogram_svg(o, g, f, p, name=names[f])
                    svgs.append(p)
            p = d / "combined.svg"
            combined_chart_svg(scores, p, names=names)
            svgs.append(p)

        stamp = (now or _dt.datetime.now(_dt.timezone.utc)).isoformat()
        report = build_report(
            config=config.to_json(),
            outliers=outlier_summary.to_json(),
            imputation=impute_summary.to_json(),
            augmentation=aug_summary.to_json(),
            importance=[{"feature": n, "weight": float(w)} for n, w in zip(names, weights)],
            ks={m: [k.to_json(names[f]) for f, k in enumerate(ev[0])]
                for m, ev in evaluations.items()},
            scores={m: scores_section(ev[1], ev[2], names, rank_features(ev[1]))
                    for m, ev in evaluations.items()},
            provenance={
                "master_seed": config.master_seed,
                "seeds": {k: v for k, v in config.seeds().items() if v is not None}
                | {"augment": aug_cfg.seed},
                "versions": {
                    "xgewfi": __version__,
                    "schema": str(SCHEMA_VERSION),
                    "numpy": np.__version__,
                    "python": platform.python_version(),
                },
                "timestamp": stamp,
                "forest_trained_on": FOREST_TABLE,
            },
        )
        json_path = out / "report.json"
        json_report(report, json_path)
    first = tex[modes[0]]
    return ReportBundle(json_path, first[0], first[1], tuple(svgs), report)
