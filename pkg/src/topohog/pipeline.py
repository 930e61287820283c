"""Dataset ingestion, feature extraction and the benchmark workflows."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass

import numpy as np

from . import betti, hog, imageio, ml
from .evaluation import cross_validate, resolve_jobs, stratified_folds
from .featurefile import (
    FeatureFile,
    IncompatibleFeatureFileError,
    fingerprint,
    format_row,
    format_value,
    read_feature_file,
    read_header,
    write_feature_file,
    write_header,
)

log = logging.getLogger(__name__)

RESOLUTION = (224, 224)
IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg")
ID_COLUMNS = ("id_code", "id", "image", "image_id")
GRADE_COLUMNS = ("diagnosis", "grade", "level", "label")
TASKS = ("binary", "five")
CACHE_ENV = "TOPOHOG_CACHE_DIR"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class IndexEntry:
    sample_id: str
    path: str
    grade: int


def task_labels(grades, task) -> np.ndarray:
    """Grade 0 is normal; the binary task pools grades 1-4 into the DR class."""
    grades = np.asarray(grades, dtype=np.int64)
    if task == "binary":
        return (grades > 0).astype(np.int64)
    if task in ("five", "five_class"):
        return grades
    raise ValueError(f"unknown task {task!r}; choose from {', '.join(TASKS)}")


def _pick_column(fieldnames, candidates, what, path):
    lowered = {name.strip().lower(): name for name in fieldnames or ()}
    for c in candidates:
        if c in lowered:
            return lowered[c]
    raise DatasetError(f"{path}: no {what} column (looked for {', '.join(candidates)})")


def resolve_image(images_dir, sample_id):
    for ext in IMAGE_EXTENSIONS:
        candidate = os.path.join(images_dir, sample_id + ext)
        if os.path.isfile(candidate):
            return candidate
    return None


def ingest(manifest_path, images_dir) -> list[IndexEntry]:
    """Read an APTOS-style manifest (``id_code,diagnosis``) and locate each image."""
    if not os.path.isfile(manifest_path):
        raise FileNotFoundError(f"manifest not found: {manifest_path}")
    with open(manifest_path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        if not rows:
            log.warning("manifest %s has no rows", manifest_path)
            return []
        id_col = _pick_column(reader.fieldnames, ID_COLUMNS, "id", manifest_path)
        grade_col = _pick_column(reader.fieldnames, GRADE_COLUMNS, "grade", manifest_path)
    entries, missing = [], []
    for row in rows:
        sample_id = row[id_col].strip()
        if not sample_id or "," in sample_id:
            raise DatasetError(f"{manifest_path}: invalid sample id {sample_id!r}")
        try:
            grade = int(row[grade_col])
        except ValueError:
            raise DatasetError(f"sample {sample_id}: grade {row[grade_col]!r} is not an integer") from None
        if not 0 <= grade <= 4:
            raise DatasetError(f"sample {sample_id}: grade {grade} outside [0, 4]")
        path = resolve_image(images_dir, sample_id)
        if path is None:
            missing.append(sample_id)
            continue
        entries.append(IndexEntry(sample_id, path, grade))
    if missing:
        shown = ", ".join(missing[:20]) + (" ..." if len(missing) > 20 else "")
        raise DatasetError(f"{len(missing)} image(s) not found in {images_dir}: {shown}")
    return entries


def write_index(entries, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "path", "grade"])
        for e in entries:
            writer.writerow([e.sample_id, e.path, e.grade])


def read_index(path) -> list[IndexEntry]:
    with open(path, newline="") as fh:
        return [IndexEntry(r["id"], r["path"], int(r["grade"])) for r in csv.DictReader(fh)]


def class_counts(entries, task) -> dict:
    labels = task_labels([e.grade for e in entries], task)
    values, counts = np.unique(labels, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def extractor_params(kind, resolution=RESOLUTION, hog_params=None, grid=None) -> dict:
    if kind == "tda":
        g = betti.default_grid() if grid is None else np.asarray(grid)
        return {"resolution": list(resolution), "channels": list(betti.CHANNELS),
                "dims": list(betti.DIMS), "grid": [int(t) for t in g]}
    if kind == "hog":
        return {"resolution": list(resolution), **asdict(hog_params or hog.HogParams())}
    raise ValueError(f"unknown feature kind {kind!r}; choose tda or hog")


def features_from_image(img, kind, params) -> np.ndarray:
    """Resize, then run the selected extractor on one decoded image."""
    w, h = params["resolution"]
    img = imageio.resize(img, w, h)
    if kind == "tda":
        rgb = img if img.ndim == 3 else np.repeat(img[:, :, None], 3, axis=2)
        return betti.tda_features(imageio.split_channels(rgb), params["grid"])
    gray = imageio.to_grayscale(img) if img.ndim == 3 else img
    hp = hog.HogParams(**{k: params[k] for k in ("orientations", "cell_size", "block_size",
                                                   "clip", "epsilon")})
    return hog.hog_features(gray, hp)


def _extract_one(entry, kind, params):
    try:
        return entry, features_from_image(imageio.load_image(entry.path), kind, params), None
    except (imageio.ImageError, ValueError, OSError) as exc:
        return entry, None, f"{type(exc).__name__}: {exc}"


def extract(entries, kind, out_path, *, params=None, n_jobs=1) -> dict:
    """Extract features for every entry into ``out_path``; resumable.

    Rows already present in a compatible file are kept and their images
    skipped. Rows are appended as they finish, then the file is rewritten in
    sample-id order. Decode failures are collected into
    ``<out_path>.errors.csv`` instead of aborting. Returns a small summary.
    """
    params = params or extractor_params(kind)
    fp = fingerprint(kind, params)
    done = set()
    if os.path.exists(out_path):
        meta, _ = read_header(out_path)
        if meta["kind"] != kind or meta["fingerprint"] != fp:
            raise IncompatibleFeatureFileError(
                f"{out_path} was written by a different extractor configuration "
                f"({meta['kind']}, {meta['fingerprint']}); expected ({kind}, {fp})")
        done = set(read_feature_file(out_path).ids)
    todo = [e for e in entries if e.sample_id not in done]
    failures = []

    mode = "a" if done or os.path.exists(out_path) else "w"
    with open(out_path, mode, newline="") as fh:
        if mode == "w":
            n_features = (len(params["grid"]) * 8 if kind == "tda" else
                          hog.descriptor_length(*params["resolution"], hog.HogParams(
                              **{k: params[k] for k in ("orientations", "cell_size",
                                                         "block_size", "clip", "epsilon")})))
            write_header(fh, kind, params, n_features)

        def record(entry, values, error):
            if error is not None:
                log.warning("skipping %s: %s", entry.sample_id, error)
                failures.append((entry, error))
                return
            fh.write(format_row(entry.sample_id, entry.grade, values) + "\n")
            fh.flush()

        workers = resolve_jobs(n_jobs)
        if workers == 1 or len(todo) < 2:
            for e in todo:
                record(*_extract_one(e, kind, params))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_extract_one, e, kind, params) for e in todo]
                for fut in as_completed(futures):
                    record(*fut.result())

    write_feature_file(read_feature_file(out_path), out_path)
    err_path = f"{out_path}.errors.csv"
    if failures:
        with open(err_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["id", "path", "error"])
            for e, msg in sorted(failures, key=lambda f: f[0].sample_id):
                writer.writerow([e.sample_id, e.path, msg])
    elif os.path.exists(err_path):
        os.remove(err_path)
    return {"written": len(todo) - len(failures), "skipped": len(done),
            "failed": len(failures), "path": str(out_path)}


def _fmt(v):
    return format_value(round(float(v), 10))


def run_benchmark(feature_path, task, models, seed, out_dir, *, folds=10, n_jobs=1, svg=False):
    """Cross-validate each model on a feature file and write the report tables.

    Writes ``metrics.csv``, ``confusion.csv``, ``roc.csv`` (binary only),
    ``radar.csv`` and ``summary.txt`` into ``out_dir``; returns the reports.
    """
    unknown = [m for m in models if m not in ml.MODEL_KINDS]
    if unknown:
        raise ValueError(f"unknown model(s) {unknown}; choose from {', '.join(ml.MODEL_KINDS)}")
    ff = read_feature_file(feature_path)
    if len(ff.ids) == 0:
        raise ValueError(f"{feature_path} contains no samples")
    labels = task_labels(ff.labels, task)
    n_classes = 2 if task == "binary" else 5
    if labels.max() >= n_classes:
        raise ValueError(f"labels in {feature_path} do not fit the {task} task")
    split = stratified_folds(labels, folds, seed)
    os.makedirs(out_dir, exist_ok=True)

    reports = []
    for kind in models:
        log.info("cross-validating %s", kind)
        spec = ml.ModelSpec(kind, seed=seed)
        reports.append(cross_validate(spec, ff.values, labels, split, n_classes, n_jobs=n_jobs))

    names = reports[0].metric_names
    with open(os.path.join(out_dir, "metrics.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model"] + [f"{n}_{s}" for n in names for s in ("mean", "std")])
        for r in reports:
            w.writerow([r.model] + [_fmt(v) for n in names for v in (r.mean(n), r.std(n))])
    with open(os.path.join(out_dir, "radar.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model"] + list(names))
        for r in reports:
            w.writerow([r.model] + [_fmt(r.mean(n)) for n in names])
    with open(os.path.join(out_dir, "confusion.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "fold", "true", "predicted", "count"])
        for r in reports:
            for f in r.folds:
                for (i, j), c in np.ndenumerate(f.confusion):
                    w.writerow([r.model, f.fold, i, j, int(c)])
    if n_classes == 2:
        with open(os.path.join(out_dir, "roc.csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["model", "fold", "fpr", "tpr", "threshold"])
            for r in reports:
                for f in r.folds:
                    if f.roc is None:
                        continue
                    for fpr, tpr, thr in f.roc:
                        w.writerow([r.model, f.fold, _fmt(fpr), _fmt(tpr),
                                    "inf" if np.isinf(thr) else _fmt(thr)])

    counts = {int(c): int(n) for c, n in zip(*np.unique(labels, return_counts=True))}
    header = {"accuracy": "Avg Acc", "precision": "Avg Prec", "recall": "Avg Rec",
              "f1": "Avg F1-score", "auc": "Avg AUC"}
    lines = [
        f"features: {ff.kind} ({ff.n_features} dims, {len(ff.ids)} samples, fingerprint {ff.fingerprint})",
        f"task: {task}   folds: {folds}   seed: {seed}",
        f"class counts: {counts}",
        "",
        f"{'model':<16}" + "".join(f"{header[n]:>16}" for n in names),
    ]
    for r in reports:
        cells = "".join(f"{f'{r.mean(n):.2f} ± {r.std(n):.2f}':>16}" for n in names)
        lines.append(f"{r.model:<16}{cells}")
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")

    if svg and n_classes == 2:
        grid = np.linspace(0, 1, 101)
        series = []
        for r in reports:
            curves = [np.interp(grid, f.roc[:, 0], f.roc[:, 1]) for f in r.folds if f.roc is not None]
            if curves:
                series.append((f"{r.model} ({r.mean('auc'):.1f})", grid, np.mean(curves, axis=0)))
        if series:
            from .svgplot import line_chart

            line_chart(os.path.join(out_dir, "roc.svg"), series, title=f"ROC ({ff.kind} features)",
                       xlabel="false positive rate", ylabel="true positive rate")
    return reports


def betti_bands(ff: FeatureFile, task, coverage=0.4) -> list[dict]:
    """Median curve and band per class and per (channel, dimension) block."""
    if ff.kind != "tda":
        raise ValueError(f"Betti analysis needs a tda feature file, got {ff.kind!r}")
    grid = np.asarray(ff.params["grid"])
    n = len(grid)
    labels = task_labels(ff.labels, task)
    out = []
    for c in np.unique(labels):
        rows = ff.values[labels == c]
        for b, (ch, dim) in enumerate((ch, d) for ch in betti.CHANNELS for d in betti.DIMS):
            band = betti.median_band(rows[:, b * n:(b + 1) * n], coverage)
            out.append({"class": int(c), "channel": ch, "dim": dim, "grid": grid, "band": band})
    return out


def analyze_betti(feature_path, task, coverage, out_dir, *, svg=False):
    """Write ``betti_bands.csv`` (class, channel, dim, threshold, median, lower, upper)."""
    ff = read_feature_file(feature_path)
    bands = betti_bands(ff, task, coverage)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "betti_bands.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["class", "channel", "dim", "threshold", "median", "lower", "upper"])
        for item in bands:
            band = item["band"]
            for t, m, lo, hi in zip(item["grid"], band.median, band.lower, band.upper):
                w.writerow([item["class"], item["channel"], item["dim"], int(t),
                            _fmt(m), _fmt(lo), _fmt(hi)])
    if svg:
        from .svgplot import line_chart

        for ch in betti.CHANNELS:
            for dim in betti.DIMS:
                sel = [b for b in bands if b["channel"] == ch and b["dim"] == dim]
                line_chart(
                    os.path.join(out_dir, f"betti_{ch}_b{dim}.svg"),
                    [(f"class {b['class']}", b["grid"], b["band"].median) for b in sel],
                    bands=[(f"class {b['class']}", b["grid"], b["band"].lower, b["band"].upper)
                           for b in sel],
                    title=f"{ch} channel, Betti-{dim} median and {coverage:.0%} band",
                    xlabel="intensity threshold", ylabel=f"Betti-{dim}")
    return bands


def default_cache_dir():
    return os.environ.get(CACHE_ENV, os.path.join(os.getcwd(), "topohog-cache"))
