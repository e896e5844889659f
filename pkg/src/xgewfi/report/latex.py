"""LaTeX tabular fragments for the global and per-feature results.

By default the weighted (xGEWFI) figures are shown multiplied by 100,
as a percentage; importances and KS errors stay in raw units.
"""
from pathlib import Path


def _num(v):
    return f"{v:.2f}"


def results_table(globals_, percent=True):
    scale = 100.0 if percent else 1.0
    lines = [
        r"\begin{tabular}{l|r}%",
        r"Metrics&Values\\%",
        r"\hline%",
        rf"\textit{{xGEWFI}} mean error&{_num(globals_.xgewfi * scale)}\\%",
        rf"KS mean error&{_num(globals_.ks_global)}\\%",
        r"\end{tabular}%",
    ]
    return "\n".join(lines) + "\n"


_TEX_SPECIAL = {"\\": r"\textbackslash{}", "&": r"\&", "%": r"\%", "$": r"\$",
                "#": r"\#", "_": r"\_", "{": r"\{", "}": r"\}"}


def _tex_escape(s):
    return "".join(_TEX_SPECIAL.get(ch, ch) for ch in s)


def explain_table(scores, names=None, percent=True):
    scale = 100.0 if percent else 1.0
    lines = [
        r"\begin{tabular}{l|r|r|r}%",
        r"Features&Imp.&KS error&\textit{xGEWFI} error\\%",
        r"\hline%",
    ]
    for s in scores:
        label = _tex_escape(names[s.feature_index]) if names else f"Feature {s.feature_index + 1}"
        lines.append(f"{label}&{_num(s.importance)}&{_num(s.ks_error)}&"
                     f"{_num(s.weighted_error * scale)}\\\\%")
    lines.append(r"\end{tabular}%")
    return "\n".join(lines) + "\n"


def latex_tables(scores, globals_, results_path, explain_path, names=None, percent=True):
    Path(results_path).write_text(results_table(globals_, percent), encoding="utf-8")
    Path(explain_path).write_text(explain_table(scores, names, percent), encoding="utf-8")
