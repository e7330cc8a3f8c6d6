"""Maximum band depth classification of landscapes, with cross-validation.

Each class is summarized by a bootstrap confidence band of its training
landscapes; the depth of a landscape in a band is the fraction of grid nodes
where it lies inside, and prediction picks the deepest class.
"""

import zlib
from dataclasses import dataclass

import numpy as np

from ._seeding import derive_rng, derive_seed
from .bands import bootstrap_band
from .landscape import _check_compatible

__all__ = [
    "BandModel",
    "Prediction",
    "CVReport",
    "band_depth",
    "train",
    "predict",
    "cross_validate",
    "cross_validate_report",
    "save_results",
    "save_confusion_csv",
]


@dataclass(frozen=True)
class BandModel:
    """One confidence band per class, in a fixed class order."""

    classes: tuple
    bands: dict
    method: str
    B: int
    alpha: float

    def __post_init__(self):
        if not self.classes:
            raise ValueError("model needs at least one class")
        if set(self.classes) != set(self.bands):
            raise ValueError("classes and bands must agree")
        grids = {self.bands[c].mean.grid for c in self.classes}
        if len(grids) != 1:
            raise ValueError("all class bands must share one grid")
        object.__setattr__(self, "classes", tuple(self.classes))


@dataclass(frozen=True)
class Prediction:
    label: object
    depths: dict
    tie: bool


def band_depth(landscape, band):
    """Fraction of grid nodes x with lower(x) ≤ landscape(x) ≤ upper(x)."""
    _check_compatible(landscape, band.mean)
    v = landscape.values
    inside = (band.lower <= v) & (v <= band.upper)
    return float(inside.mean())


def _sample_fingerprint(landscapes):
    """CRC of the sample's value bytes; keys the per-class training stream.

    Tying the stream to content (rather than class name or position) makes
    training invariant under relabeling and gives identical bands to
    identical samples.
    """
    crc = 0
    for lg in landscapes:
        crc = zlib.crc32(lg.values.tobytes(), crc)
    return crc


def train(samples, method, B, alpha, seed, scale_half=False, clamp_zero=False):
    """Fit one bootstrap band per class.

    ``samples`` maps class label → sequence of landscapes (≥ 2 per class);
    the label order of the mapping fixes the tie-breaking order.
    """
    if not samples:
        raise ValueError("need at least one class")
    bands = {}
    for label, landscapes in samples.items():
        landscapes = list(landscapes)
        if len(landscapes) < 2:
            raise ValueError(f"class {label!r} needs at least 2 landscapes")
        class_seed = derive_seed(seed, "train-band", _sample_fingerprint(landscapes))
        bands[label] = bootstrap_band(landscapes, method, B, alpha, class_seed,
                                      scale_half=scale_half, clamp_zero=clamp_zero)
    return BandModel(classes=tuple(samples), bands=bands, method=method,
                     B=int(B), alpha=float(alpha))


def predict(model, landscape):
    """Deepest class for a landscape; ties flagged and broken by class order."""
    depths = {label: band_depth(landscape, model.bands[label])
              for label in model.classes}
    best = max(depths.values())
    winners = [label for label in model.classes if depths[label] == best]
    return Prediction(label=winners[0], depths=depths, tie=len(winners) > 1)


# ---------------------------------------------------------------------------
# cross-validation


@dataclass(frozen=True)
class CVReport:
    classes: tuple
    fold_accuracies: tuple
    mean_accuracy: float
    sd_accuracy: float
    confusion: np.ndarray  # rows: true class, cols: predicted class
    method: str
    B: int
    alpha: float
    folds: int
    seed: int


def cross_validate_report(samples, folds, method, B, alpha, seed,
                          scale_half=False, clamp_zero=False):
    """Stratified k-fold cross-validation of the band-depth classifier.

    Every class is split into ``folds`` parts by a derived permutation; fold
    f trains on the other parts and predicts this one.  Returns per-fold
    accuracies plus the confusion matrix summed over folds.
    """
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if not samples:
        raise ValueError("need at least one class")
    labels = list(samples)
    per_class = {}
    for ci, label in enumerate(labels):
        landscapes = list(samples[label])
        if len(landscapes) < folds:
            raise ValueError(f"class {label!r} has fewer samples than folds")
        perm = derive_rng(seed, "cv-folds", ci).permutation(len(landscapes))
        assignment = np.empty(len(landscapes), dtype=np.int64)
        assignment[perm] = np.arange(len(landscapes)) % folds
        per_class[label] = (landscapes, assignment)

    index = {label: i for i, label in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    fold_accuracies = []
    for f in range(folds):
        train_samples = {
            label: [lg for lg, a in zip(landscapes, assignment) if a != f]
            for label, (landscapes, assignment) in per_class.items()
        }
        model = train(train_samples, method, B, alpha, seed,
                      scale_half=scale_half, clamp_zero=clamp_zero)
        hits = 0
        total = 0
        for label, (landscapes, assignment) in per_class.items():
            for lg, a in zip(landscapes, assignment):
                if a != f:
                    continue
                pred = predict(model, lg)
                confusion[index[label], index[pred.label]] += 1
                hits += pred.label == label
                total += 1
        fold_accuracies.append(hits / total)

    accs = np.asarray(fold_accuracies)
    return CVReport(classes=tuple(labels), fold_accuracies=tuple(fold_accuracies),
                    mean_accuracy=float(accs.mean()),
                    sd_accuracy=float(accs.std(ddof=0)),
                    confusion=confusion, method=method, B=int(B),
                    alpha=float(alpha), folds=int(folds), seed=int(seed))


def cross_validate(samples, folds, method, B, alpha, seed, **kwargs):
    """(mean accuracy, s.d. of fold accuracies) of stratified k-fold CV."""
    report = cross_validate_report(samples, folds, method, B, alpha, seed, **kwargs)
    return report.mean_accuracy, report.sd_accuracy


# ---------------------------------------------------------------------------
# file I/O


def save_results(path, report):
    """Write the results document: config echo, per-fold accuracies, summary."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"method={report.method} B={report.B} alpha={report.alpha:.17g} "
                 f"folds={report.folds} seed={report.seed}\n")
        fh.write("classes=" + ",".join(str(c) for c in report.classes) + "\n")
        for f, acc in enumerate(report.fold_accuracies):
            fh.write(f"fold {f} accuracy {acc:.17g}\n")
        fh.write(f"mean_accuracy={report.mean_accuracy:.17g}\n")
        fh.write(f"sd_accuracy={report.sd_accuracy:.17g}\n")
        fh.write(f"summary: {report.mean_accuracy:.2f} ± {report.sd_accuracy:.2f}\n")


def save_confusion_csv(path, report):
    """Write the confusion matrix as CSV (rows true, columns predicted)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("true\\predicted," + ",".join(str(c) for c in report.classes) + "\n")
        for i, label in enumerate(report.classes):
            row = ",".join(str(int(v)) for v in report.confusion[i])
            fh.write(f"{label},{row}\n")
