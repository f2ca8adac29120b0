"""
FluxCoupler Output Writers

CSV files with `#` metadata lines and a fixed number of significant digits,
plus optional SVG line plots rendered headless with matplotlib.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

logger = logging.getLogger(__name__)

# fixed hash salt and no timestamp keep SVG output byte-stable
plt.rcParams["svg.hashsalt"] = "fluxcoupler"


def write_csv(frame: pd.DataFrame, path: Path, metadata: Dict[str, Any], digits: int = 9) -> Path:
    """Write `frame` after one `# key: value` line per metadata entry."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for key, value in metadata.items():
            f.write(f"# {key}: {value}\n")
        frame.to_csv(f, index=False, float_format=f"%.{digits}g", lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(document: Dict[str, Any], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def read_table(path: Path) -> pd.DataFrame:
    """Read a CSV written by `write_csv` or a plain measured-data table."""
    return pd.read_csv(path, comment="#")


def render_svg(
    frame: pd.DataFrame,
    x: str,
    columns: Sequence[str],
    path: Path,
    title: str = "",
    ylabel: Optional[str] = None,
    group: Optional[str] = None,
) -> Path:
    """Line plot of `columns` against `x`; `group` splits rows into separate traces."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    try:
        if group is not None:
            for key, subset in frame.groupby(group, sort=True):
                for column in columns:
                    ax.plot(subset[x], subset[column], label=f"{column} {group}={key}")
        else:
            for column in columns:
                ax.plot(frame[x], frame[column], label=column)
        ax.set_xlabel(x)
        if ylabel:
            ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info(f"Rendered {path}")
    return path
