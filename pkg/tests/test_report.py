import re
import shutil
import subprocess
from datetime import datetime, timezone
from xml.etree import ElementTree as ET

import jsonschema
import numpy as np
import pytest

from conftest import make_ds
from xgewfi.dataset import Kind
from xgewfi.errors import DataError
from xgewfi.forest import ForestConfig
from xgewfi.metric import GlobalScores, score
from xgewfi.pipeline import default_config, run
from xgewfi.report import (
    boxplot_svg,
    combined_chart_svg,
    explain_table,
    histogram_counts,
    histogram_svg,
    load_schema,
    results_table,
)
from xgewfi.report.json_report import dumps
from xgewfi.synthgen import GenConfig

SVG = "{http://www.w3.org/2000/svg}"


def parse(path):
    return ET.parse(path).getroot()


def by_class(root, tag, cls):
    return [e for e in root.iter(SVG + tag) if e.get("class") == cls]


# -- box plot ---------------------------------------------------------------

def test_boxplot_one_group_per_feature(tmp_path, rng):
    ds = make_ds(rng.normal(size=(200, 5)))
    boxplot_svg(ds, tmp_path / "b.svg")
    root = parse(tmp_path / "b.svg")
    groups = by_class(root, "g", "box")
    assert [g.get("data-feature") for g in groups] == ["0", "1", "2", "3", "4"]
    for g in groups:
        assert len([e for e in g if e.get("class") == "iqr-box"]) == 1
        assert len([e for e in g if e.get("class") == "median"]) == 1


def test_boxplot_constant_feature_has_no_dots(tmp_path):
    ds = make_ds(np.full((20, 2), 3.0))
    stats = boxplot_svg(ds, tmp_path / "b.svg")
    assert all(s.outliers.size == 0 for s in stats)
    assert not list(parse(tmp_path / "b.svg").iter(SVG + "circle"))


def test_boxplot_single_outlier(tmp_path):
    col = np.array([1, 2, 3, 4, 5, 6, 7, 8, 9, 100], float)
    stats = boxplot_svg(make_ds(col[:, None]), tmp_path / "b.svg")
    assert stats[0].outliers.tolist() == [100.0]
    assert len(list(parse(tmp_path / "b.svg").iter(SVG + "circle"))) == 1
    assert stats[0].whisker_high == 9.0


def test_boxplot_ignores_missing_cells(tmp_path):
    vals = np.array([[1.0], [2.0], [np.nan], [3.0]])
    stats = boxplot_svg(make_ds(vals), tmp_path / "b.svg")
    assert stats[0].fences.median == 2.0


# -- histograms -------------------------------------------------------------

def test_histogram_identical_samples(rng):
    x = rng.normal(size=500)
    spec = histogram_counts(x, x.copy())
    assert spec.original_counts.tolist() == spec.generated_counts.tolist()
    assert spec.bin_edges.size == spec.original_counts.size + 1 == 23


def test_histogram_shift_lands_in_overflow(rng):
    x = rng.normal(size=1000)
    spec = histogram_counts(x, x + 5 * x.std())
    # every shifted value sits at z >= 5 - 4.x, most in the top overflow bin
    assert spec.generated_counts[-1] > 0.8 * x.size
    assert spec.generated_counts[0] == 0


def test_histogram_counts_conserved(rng):
    x = rng.standard_t(2, size=400)
    g = rng.normal(size=123) * 10
    spec = histogram_counts(x, g)
    assert spec.original_counts.sum() == 400 and spec.generated_counts.sum() == 123


def test_histogram_bin_edges_half_open():
    x = np.array([-1.0, 1.0])  # mean 0, std 1
    spec = histogram_counts(x, np.array([0.0, 4.0, -4.0]))
    # 0 belongs to the bin starting at 0, +4 to the top overflow, -4 to the first inner bin
    assert spec.generated_counts[11] == 1
    assert spec.generated_counts[-1] == 1
    assert spec.generated_counts[1] == 1


def test_histogram_zero_variance_rejected():
    with pytest.raises(DataError):
        histogram_counts(np.ones(5), np.ones(3))


def test_histogram_svg_series(tmp_path, rng):
    histogram_svg(rng.normal(size=50), rng.normal(size=30), 2, tmp_path / "h.svg", name="x2")
    root = parse(tmp_path / "h.svg")
    assert len(by_class(root, "rect", "original")) == 22
    assert len(by_class(root, "rect", "generated")) == 22
    assert "x2" in (tmp_path / "h.svg").read_text()


# -- combined chart ---------------------------------------------------------

def _bar_heights(path, cls):
    return [float(e.get("height")) for e in by_class(parse(path), "rect", cls)]


def test_combined_one_hot(tmp_path):
    scores, _ = score([0.0, 1.0, 0.0], [0.3, 0.2, 0.5])
    combined_chart_svg(scores, tmp_path / "c.svg")
    imp = _bar_heights(tmp_path / "c.svg", "importance")
    w = _bar_heights(tmp_path / "c.svg", "weighted")
    assert imp[0] == imp[2] == 0 and imp[1] > 0
    assert w[0] == w[2] == 0 and w[1] > 0
    assert len(_bar_heights(tmp_path / "c.svg", "ks-error")) == 3


def test_combined_all_zero(tmp_path):
    scores, _ = score([0.5, 0.5], [0.0, 0.0])
    combined_chart_svg(scores, tmp_path / "c.svg")
    assert _bar_heights(tmp_path / "c.svg", "ks-error") == [0.0, 0.0]
    assert _bar_heights(tmp_path / "c.svg", "weighted") == [0.0, 0.0]


# -- LaTeX ------------------------------------------------------------------

def test_results_table_layout():
    tex = results_table(GlobalScores(ks_global=1.69, xgewfi=0.3376))
    lines = tex.splitlines()
    assert lines[0] == r"\begin{tabular}{l|r}%"
    assert lines[1] == r"Metrics&Values\\%"
    assert lines[3] == r"\textit{xGEWFI} mean error&33.76\\%"
    assert lines[4] == r"KS mean error&1.69\\%"
    assert lines[-1] == r"\end{tabular}%"
    assert "0.34" in results_table(GlobalScores(1.69, 0.3376), percent=False)


def test_explain_table_rows():
    scores, _ = score([0.57, 0.2, 0.18, 0.0, 0.04], [0.34] * 4 + [0.33], normalized=False)
    tex = explain_table(scores, ["a_b", "x1", "x2", "x3", "x4"])
    rows = tex.splitlines()
    assert rows[1] == r"Features&Imp.&KS error&\textit{xGEWFI} error\\%"
    assert rows[3] == r"a\_b&0.57&0.34&19.38\\%"
    assert len(rows) == 3 + 5 + 1
    for r in rows[3:-1]:
        assert re.fullmatch(r"[^&]+(&-?\d+\.\d\d){3}\\\\%", r)


@pytest.mark.skipif(shutil.which("pdflatex") is None, reason="pdflatex not installed")
def test_tables_compile(tmp_path):
    scores, g = score([0.5, 0.5], [0.1, 0.2])
    doc = ("\\documentclass{article}\\begin{document}\n" + results_table(g)
           + explain_table(scores) + "\\end{document}\n")
    (tmp_path / "t.tex").write_text(doc)
    proc = subprocess.run(["pdflatex", "-interaction=nonstopmode", "t.tex"], cwd=tmp_path,
                          capture_output=True)
    assert proc.returncode == 0


# -- JSON report ------------------------------------------------------------

STAMP = datetime(2024, 1, 1, tzinfo=timezone.utc)


def small_config(tmp_path, name, **kw):
    return default_config(
        Kind.REGRESSION, 7,
        generate=GenConfig(n_samples=300, random_state=7),
        forest=ForestConfig(n_trees=8, seed=3),
        out_dir=str(tmp_path / name), **kw)


@pytest.fixture(scope="module")
def schema():
    return load_schema()


def test_report_validates(tmp_path, schema):
    bundle = run(small_config(tmp_path, "a"), now=STAMP)
    jsonschema.validate(bundle.report, schema)
    assert bundle.report["augmentation"]["n_generated"] == 0
    assert set(bundle.report["scores"]) == {"imputation"}


def test_report_deterministic(tmp_path):
    a = run(small_config(tmp_path, "a"), now=STAMP)
    b = run(small_config(tmp_path, "b"))
    ra, rb = dict(a.report), dict(b.report)
    ra["provenance"] = {**ra["provenance"], "timestamp": None}
    rb["provenance"] = {**rb["provenance"], "timestamp": None}
    ra["config"] = rb["config"] = None  # out_dir differs
    assert dumps(ra) == dumps(rb)


def test_schema_rejects_missing_section(tmp_path, schema):
    bundle = run(small_config(tmp_path, "a"), now=STAMP)
    broken = dict(bundle.report)
    del broken["ks"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(broken, schema)


def test_report_has_no_nan(tmp_path):
    bundle = run(small_config(tmp_path, "a"), now=STAMP)
    text = bundle.json_path.read_text()
    assert "NaN" not in text and "Infinity" not in text
