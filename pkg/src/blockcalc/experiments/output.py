"""Result tables and generated plot scripts."""
from __future__ import annotations

from pathlib import Path
from string import Template

import pandas as pd

from ..errors import ConfigError

FLOAT_FORMAT = "%.6f"

_HEADER = '''\
#!/usr/bin/env python3
"""Plot $title. Generated by blockcalc; reads $csv_name next to this script."""
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

here = Path(__file__).resolve().parent
data = pd.read_csv(here / "$csv_name")

plt.rcParams["font.size"] = 9
plt.rcParams["figure.figsize"] = [4.0, 2.8]

fig, ax = plt.subplots()
'''

_FOOTER = '''
ax.spines["right"].set_visible(False)
ax.spines["top"].set_visible(False)
fig.tight_layout()
fig.savefig(here / "$pdf_name")
print("wrote", here / "$pdf_name")
'''

_BODIES = {
    "success_band": '''\
ax.fill_between(data["value"], data["p1"], data["p99"], color="tab:orange", alpha=0.3,
                label="simulation p1-p99")
ax.plot(data["value"], data["p50"], color="tab:orange", label="simulation p50")
ax.plot(data["value"], data["model"], color="tab:blue", linestyle="--", marker="o",
        label="model")
ax.set_xlabel("$xlabel")
ax.set_ylabel("success rate")
ax.legend(frameon=False)
''',
    "overlap_table": '''\
ax.plot(data["alpha"], data["p_ww_key_conflict"], marker="o", label="write-write conflict")
ax.set_xlabel("alpha")
ax.set_ylabel("write-write conflict probability")
twin = ax.twinx()
twin.plot(data["alpha"], data["overlap"], marker="s", color="tab:red", label="R/W overlap area")
twin.set_ylabel("R/W overlap area")
fig.legend(frameon=False, loc="upper center")
''',
    "latency_sweep": '''\
ax.plot(data["value"], data["latency"], marker="o", label="expected latency")
ax.plot(data["value"], data["wait"], linestyle=":", label="batching wait")
saturated = data[data["saturated"]]
ax.scatter(saturated["value"], saturated["latency"], color="tab:red", zorder=3,
           label="saturated")
ax.set_xlabel("$xlabel")
ax.set_ylabel("latency (s)")
ax.legend(frameon=False)
''',
    "key_distribution": '''\
plt.close(fig)
fig, (ax, right) = plt.subplots(1, 2, sharey=True, figsize=[8.0, 2.8])
for alpha, group in data.groupby("alpha"):
    ax.plot(group["key"], group["forward"], label=f"alpha={alpha:g}")
    right.plot(group["key"], group["reversed"], label=f"alpha={alpha:g}")
ax.set_title("forward")
right.set_title("reversed")
ax.set_xlabel("key")
right.set_xlabel("key")
ax.set_ylabel("probability")
ax.legend(frameon=False)
right.spines["right"].set_visible(False)
right.spines["top"].set_visible(False)
''',
    "key_overlay": '''\
for i, (alpha, group) in enumerate(data.groupby("alpha")):
    ax.plot(group["key"], group["forward"], color=f"C{i}", label=f"alpha={alpha:g}")
    ax.plot(group["key"], group["reversed"], color=f"C{i}", linestyle="--")
ax.set_xlabel("key")
ax.set_ylabel("probability")
ax.legend(frameon=False)
''',
    "latency_fit": '''\
ax.scatter(data["bs"], data["measured"], label="measured")
ax.plot(data["bs"], data["predicted"], color="tab:orange", marker="x", label="model")
saturated = data[data["saturated"]]
ax.scatter(saturated["bs"], saturated["measured"], color="tab:red", label="saturated")
ax.set_xscale("log", base=2)
ax.set_xlabel("batch size")
ax.set_ylabel("average latency (s)")
ax.legend(frameon=False)
''',
}


def ensure_output_dir(path: Path) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {path}: {e}") from e
    if not path.is_dir():
        raise ConfigError(f"output path {path} is not a directory")
    return path


def write_table(frame: pd.DataFrame, path: Path) -> Path:
    try:
        frame.to_csv(
            path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8"
        )
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e}") from e
    return path


def render_plot_script(style: str, csv_name: str, title: str, xlabel: str = "") -> str:
    if style not in _BODIES:
        raise ValueError(f"Unknown plot style: {style}")
    pdf_name = Path(csv_name).with_suffix(".pdf").name
    text = _HEADER + _BODIES[style] + _FOOTER
    return Template(text).substitute(
        title=title, csv_name=csv_name, pdf_name=pdf_name, xlabel=xlabel
    )


def write_plot_script(path: Path, style: str, csv_name: str, title: str, xlabel: str = "") -> Path:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(render_plot_script(style, csv_name, title, xlabel))
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e}") from e
    return path
