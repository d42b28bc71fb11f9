"""Dataset ingestion, confusion-matrix scoring and whole-model evaluation.

The positive class is label 1 (Virginica in the bundled data); every report
records this so the 2x2 counts are interpretable either way round.
"""

import csv
import io
import json
import statistics
from dataclasses import dataclass
from importlib import resources

from .inference import Batch, predict
from .linalg import Matrix
from .network import NetworkSpec

SCALING_MODES = ("none", "minmax", "standard")
POSITIVE_LABEL = 1

_SPECIES_LABELS = {"versicolor": 0, "virginica": 1}
_BUNDLED_DATASET = "iris_versicolor_virginica.csv"


class DatasetFormatError(ValueError):
    """Malformed CSV input."""


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix (one row per sample) with binary labels."""

    features: Matrix
    labels: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.labels) != self.features.rows:
            raise DatasetFormatError(
                f"{len(self.labels)} labels for {self.features.rows} samples"
            )

    @property
    def size(self) -> int:
        return self.features.rows


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 scoreboard; rows are actual, columns predicted, positive first."""

    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def accuracy(self) -> float:
        if self.total == 0:
            raise ValueError("empty confusion matrix has no accuracy")
        return (self.tp + self.tn) / self.total

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}


def _parse_label(token: str, row_num: int) -> int:
    text = token.strip().lower()
    if text in _SPECIES_LABELS:
        return _SPECIES_LABELS[text]
    if text in ("0", "1"):
        return int(text)
    raise DatasetFormatError(
        f"row {row_num}: unknown species or label {token.strip()!r} "
        f"(expected 0, 1, versicolor or virginica)"
    )


def _parse_feature(token: str, row_num: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise DatasetFormatError(
            f"row {row_num}: {token.strip()!r} is not a number"
        ) from None


def _read_rows(text: str) -> list[tuple[int, list[str]]]:
    """Non-empty CSV rows with 1-based row numbers; a leading header is dropped."""
    rows = []
    for row_num, cells in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        rows.append((row_num, cells))
    if rows:
        first = rows[0][1]
        try:
            float(first[0])
        except ValueError:
            rows = rows[1:]
    if not rows:
        raise DatasetFormatError("no data rows found")
    return rows


def load_csv(text: str, name: str = "") -> LabeledDataset:
    """Parse feature columns plus a final label column; row order preserved."""
    rows = _read_rows(text)
    width = len(rows[0][1])
    if width < 2:
        raise DatasetFormatError(
            f"row {rows[0][0]}: expected features plus a label column, got {width} column(s)"
        )
    features = []
    labels = []
    for row_num, cells in rows:
        if len(cells) != width:
            raise DatasetFormatError(
                f"row {row_num}: expected {width} columns, got {len(cells)}"
            )
        features.append([_parse_feature(c, row_num) for c in cells[:-1]])
        labels.append(_parse_label(cells[-1], row_num))
    return LabeledDataset(Matrix.from_rows(features), tuple(labels), name=name)


def load_features_csv(text: str) -> Matrix:
    """Parse a feature matrix; a trailing all-labels column is dropped if present."""
    rows = _read_rows(text)
    width = len(rows[0][1])
    has_labels = width >= 2
    for row_num, cells in rows:
        if len(cells) != width:
            raise DatasetFormatError(
                f"row {row_num}: expected {width} columns, got {len(cells)}"
            )
        if has_labels:
            try:
                _parse_label(cells[-1], row_num)
            except DatasetFormatError:
                has_labels = False
    stop = width - 1 if has_labels else width
    features = [
        [_parse_feature(c, row_num) for c in cells[:stop]] for row_num, cells in rows
    ]
    return Matrix.from_rows(features)


def bundled_dataset() -> LabeledDataset:
    """The packaged 100-sample Versicolor/Virginica subset (Fisher 1936 data)."""
    text = (resources.files("tinydense") / "data" / _BUNDLED_DATASET).read_text()
    return load_csv(text, name="iris-versicolor-virginica")


def confusion(actual: list[int], predicted: list[int]) -> ConfusionMatrix:
    """Count the four cells from paired binary label vectors."""
    if len(actual) != len(predicted):
        raise ValueError(
            f"label vectors differ in length: {len(actual)} vs {len(predicted)}"
        )
    if not actual:
        raise ValueError("cannot score an empty prediction set")
    cells = {"tp": 0, "fn": 0, "fp": 0, "tn": 0}
    for a, p in zip(actual, predicted):
        if a not in (0, 1) or p not in (0, 1):
            raise ValueError(f"labels must be 0 or 1, got actual={a!r} predicted={p!r}")
        if a == 1:
            cells["tp" if p == 1 else "fn"] += 1
        else:
            cells["fp" if p == 1 else "tn"] += 1
    return ConfusionMatrix(**cells)


def scale_features(features: Matrix, scaling: str) -> tuple[Matrix, dict | None]:
    """Rescale columns; parameters are computed from the data itself."""
    if scaling not in SCALING_MODES:
        raise ValueError(f"unknown scaling {scaling!r}, expected one of {SCALING_MODES}")
    if scaling == "none":
        return features, None
    cols = [features.col(j) for j in range(features.cols)]
    if scaling == "minmax":
        lows = [min(c) for c in cols]
        highs = [max(c) for c in cols]
        scaled = [
            [0.0 if hi == lo else (v - lo) / (hi - lo) for v, lo, hi in zip(row, lows, highs)]
            for row in features.to_rows()
        ]
        return Matrix.from_rows(scaled), {"min": lows, "max": highs}
    means = [statistics.fmean(c) for c in cols]
    stds = [statistics.pstdev(c) for c in cols]
    scaled = [
        [0.0 if sd == 0 else (v - mu) / sd for v, mu, sd in zip(row, means, stds)]
        for row in features.to_rows()
    ]
    return Matrix.from_rows(scaled), {"mean": means, "std": stds}


@dataclass(frozen=True)
class EvaluationReport:
    model: str
    dataset: str
    dispatch_mode: str
    scaling: str
    threshold: float
    positive_label: int
    confusion_matrix: ConfusionMatrix
    accuracy: float
    scaling_params: dict | None = None

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "dataset": self.dataset,
            "dispatch_mode": self.dispatch_mode,
            "scaling": self.scaling,
            "threshold": self.threshold,
            "positive_label": self.positive_label,
            "confusion_matrix": self.confusion_matrix.to_dict(),
            "accuracy": self.accuracy,
            "scaling_params": self.scaling_params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def evaluate(
    spec: NetworkSpec, ds: LabeledDataset, scaling: str = "none"
) -> EvaluationReport:
    """Predict over the dataset and score against its labels."""
    scaled, params = scale_features(ds.features, scaling)
    predictions = predict(spec, Batch(scaled))
    cm = confusion(list(ds.labels), predictions)
    return EvaluationReport(
        model=spec.name,
        dataset=ds.name,
        dispatch_mode=spec.dispatch_mode,
        scaling=scaling,
        threshold=spec.threshold,
        positive_label=POSITIVE_LABEL,
        confusion_matrix=cm,
        accuracy=cm.accuracy(),
        scaling_params=params,
    )
