"""Machine-readable run report.

Keys are emitted in a fixed order with two-space indentation, so two
runs with the same seeds differ only in ``provenance.timestamp``.
"""
import json
from importlib import resources
from pathlib import Path

SCHEMA_VERSION = 1


def load_schema():
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text("utf-8"))


def scores_section(scores, globals_, names, ranking):
    return {
        "features": [
            {
                "feature": names[s.feature_index],
                "importance": s.importance,
                "ks_error": s.ks_error,
                "weighted_error": s.weighted_error,
            }
            for s in scores
        ],
        "ks_global": globals_.ks_global,
        "xgewfi": globals_.xgewfi,
        "ranking": [names[i] for i in ranking],
    }


def build_report(config, outliers, imputation, augmentation, importance, ks, scores,
                 provenance):
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "outliers": outliers,
        "imputation": imputation,
        "augmentation": augmentation,
        "importance": importance,
        "ks": ks,
        "scores": scores,
        "provenance": provenance,
    }


def dumps(report):
    return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def json_report(report, path):
    Path(path).write_text(dumps(report), encoding="utf-8")
