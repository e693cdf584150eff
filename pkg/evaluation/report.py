# evaluation/report.py
# Versioned CSV reports: run rows, aggregates, best-gamma rows and ratios

import logging
from dataclasses import asdict, fields
from pathlib import Path

import pandas as pd

from .metrics import performance_ratios
from .runner import ResultRow

logger = logging.getLogger(__name__)

SCHEMA_TAG = "mlouvain-results/1"
COLUMNS = ["kind"] + [f.name for f in fields(ResultRow) if f.name != "kind"]
INTEGER_COLUMNS = ["h", "sample", "run", "sample_seed", "run_seed"]
SCORE_COLUMNS = ["accuracy", "nmi", "f", "communities", "outer_iterations", "wall_ms"]
CELL = ["experiment", "dataset", "setting", "param_name", "param_value", "method", "h", "gamma"]
SORT_KEYS = CELL + ["sample", "run"]
KIND_RANK = {"run": 0, "aggregate": 1, "best": 2, "ratio": 3}


def _typed(frame: pd.DataFrame) -> pd.DataFrame:
    """Nullable integers for id and seed columns, floats for scores."""
    frame = frame.reindex(columns=COLUMNS)
    for column in INTEGER_COLUMNS:
        frame[column] = frame[column].astype("Int64")
    for column in ("param_value", "gamma", "accuracy", "nmi", "f", "wall_ms"):
        frame[column] = frame[column].astype("float64")
    return frame


def runs_frame(rows) -> pd.DataFrame:
    return _typed(pd.DataFrame([asdict(row) for row in rows], columns=COLUMNS))


def aggregate(runs: pd.DataFrame) -> pd.DataFrame:
    """Mean scores per cell (experiment, dataset, setting, grid point, method, h, gamma)."""
    if runs.empty:
        return pd.DataFrame(columns=COLUMNS)
    means = runs.groupby(CELL, dropna=False, sort=True)[SCORE_COLUMNS].mean().reset_index()
    means["kind"] = "aggregate"
    return means.reindex(columns=COLUMNS)


def best_gamma(aggregates: pd.DataFrame) -> pd.DataFrame:
    """Per cell without gamma, the aggregate row of the gamma with the highest mean NMI.

    Ties go to the smallest gamma; methods without gamma keep their single row.
    """
    if aggregates.empty:
        return pd.DataFrame(columns=COLUMNS)
    ordered = aggregates.sort_values("gamma", kind="mergesort")
    keys = [column for column in CELL if column != "gamma"]
    best_index = ordered.groupby(keys, dropna=False, sort=True)["nmi"].idxmax()
    best = aggregates.loc[best_index.to_numpy()].copy()
    best["kind"] = "best"
    return best.reindex(columns=COLUMNS)


def ratio_rows(best: pd.DataFrame) -> pd.DataFrame:
    """Performance ratios over datasets, per setting and noise level, from best-gamma rows."""
    frames = []
    for (experiment, setting, param_name, param_value), cell in best.groupby(
        ["experiment", "setting", "param_name", "param_value"], sort=True
    ):
        ratios = performance_ratios(cell, metrics=("accuracy", "nmi"))
        ratios = ratios.rename(columns={"rho_accuracy": "accuracy", "rho_nmi": "nmi"})
        ratios = ratios.assign(
            kind="ratio",
            experiment=experiment,
            dataset="*",
            setting=setting,
            param_name=param_name,
            param_value=param_value,
        )
        ratios["h"] = ratios["method"].map(cell.drop_duplicates("method").set_index("method")["h"])
        frames.append(ratios.reindex(columns=COLUMNS))
    if not frames:
        return pd.DataFrame(columns=COLUMNS)
    return pd.concat(frames, ignore_index=True)


def canonical_order(frame: pd.DataFrame) -> pd.DataFrame:
    """Rows sorted by kind, then cell, sample and run, independent of completion order."""
    ranked = frame.assign(_rank=frame["kind"].map(KIND_RANK))
    ranked = ranked.sort_values(["_rank"] + SORT_KEYS, na_position="first", kind="mergesort")
    return ranked.drop(columns="_rank").reset_index(drop=True)


def build_report(rows, best: bool = True, ratios: bool = False) -> pd.DataFrame:
    """Run rows plus aggregate rows, and optionally best-gamma and ratio rows."""
    runs = runs_frame(rows)
    aggregates = aggregate(runs)
    parts = [runs, aggregates]
    if best or ratios:
        best_rows = best_gamma(aggregates)
        if best:
            parts.append(best_rows)
        if ratios:
            parts.append(ratio_rows(best_rows))
    parts = [_typed(part) for part in parts if not part.empty]
    if not parts:
        return _typed(pd.DataFrame(columns=COLUMNS))
    frame = pd.concat(parts, ignore_index=True)
    return canonical_order(_typed(frame))


def write_report(frame: pd.DataFrame, target) -> None:
    """Write ``frame`` as CSV preceded by the schema tag line.

    ``target`` is a path or an open text stream.
    """
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as stream:
            write_report(frame, stream)
        logger.info(f"Wrote {len(frame)} row(s) to {path}")
        return
    target.write(f"# schema={SCHEMA_TAG}\n" + frame.to_csv(index=False, lineterminator="\n"))


def read_report(path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
