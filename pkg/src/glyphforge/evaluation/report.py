"""Render result tables as markdown and CSV.

Three styles: ``table2`` (descriptor baselines vs the fused system),
``table3`` (network comparison), and ``table5`` (the fusion ablation
matrix with member check marks). Accuracies render as percentages with
two decimals; the best value is bold in the markdown rendering. Output
is byte-stable for identical inputs.
"""

from dataclasses import dataclass

STYLES = ("table2", "table3", "table5")

# member columns of the ablation matrix
_ABLATION_MEMBERS = (("LeNet", "L"), ("AlexNet", "A"), ("ResNet", "R"))


@dataclass(frozen=True)
class ReportBundle:
    markdown: str
    csv: str


def _accuracy_of(value) -> float:
    acc = getattr(value, "accuracy", value)
    return float(acc)


def _fmt(acc: float) -> str:
    return f"{acc * 100:.2f}"


def _roster_letters(method: str) -> str:
    """Member letters from an ensemble name like DCF-LAR; empty otherwise."""
    name = method.upper()
    if name.startswith("DCF-"):
        return name[4:]
    return ""


def render_report(results, style: str) -> ReportBundle:
    """results: ordered (method, Metrics-or-accuracy-fraction) pairs."""
    if style not in STYLES:
        raise ValueError(f"unknown report style {style!r}; choose from {STYLES}")
    if not results:
        raise ValueError("results must be non-empty")
    rows = [(method, _accuracy_of(value)) for method, value in results]
    best = max(acc for _, acc in rows)

    if style == "table5":
        header = ["Method", *(long for long, _ in _ABLATION_MEMBERS), "Accuracy (%)"]
        md_lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        csv_lines = [",".join(header)]
        for method, acc in rows:
            letters = _roster_letters(method)
            marks = ["✓" if short in letters else "" for _, short in _ABLATION_MEMBERS]
            value = _fmt(acc)
            md_value = f"**{value}**" if acc == best else value
            md_lines.append("| " + " | ".join([method, *marks, md_value]) + " |")
            csv_lines.append(",".join([method, *marks, value]))
        return ReportBundle("\n".join(md_lines) + "\n", "\n".join(csv_lines) + "\n")

    header = ["Method", "Accuracy (%)"]
    md_lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    csv_lines = [",".join(header)]
    for method, acc in rows:
        value = _fmt(acc)
        md_value = f"**{value}**" if acc == best else value
        md_lines.append(f"| {method} | {md_value} |")
        csv_lines.append(f"{method},{value}")
    return ReportBundle("\n".join(md_lines) + "\n", "\n".join(csv_lines) + "\n")
