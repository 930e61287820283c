"""CSV persistence of extracted feature matrices.

Layout::

    # kind=tda
    # version=1
    # fingerprint=3f2a...
    # params={"grid": [...], "resolution": [224, 224], ...}
    id,label,f0000,f0001,...
    000c1434d8d7,2,1,0,...

``label`` is the raw 0-4 grade; task-specific labels are derived when a
benchmark is run. Values are written in their shortest round-tripping form
(integers without a decimal point) so rewriting a file reproduces its bytes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

EXTRACTOR_VERSION = "1"


class FeatureFileError(ValueError):
    pass


class IncompatibleFeatureFileError(FeatureFileError):
    pass


def fingerprint(kind: str, params: dict, version: str = EXTRACTOR_VERSION) -> str:
    payload = json.dumps({"kind": kind, "version": version, "params": params},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def column_names(n_features: int) -> list[str]:
    width = max(4, len(str(n_features - 1)))
    return [f"f{i:0{width}d}" for i in range(n_features)]


def format_value(v) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


@dataclass
class FeatureFile:
    kind: str
    params: dict
    ids: list
    labels: np.ndarray
    values: np.ndarray
    version: str = EXTRACTOR_VERSION

    @property
    def fingerprint(self):
        return fingerprint(self.kind, self.params, self.version)

    @property
    def n_features(self):
        return self.values.shape[1]

    def header_lines(self) -> list[str]:
        return [
            f"# kind={self.kind}",
            f"# version={self.version}",
            f"# fingerprint={self.fingerprint}",
            "# params=" + json.dumps(self.params, sort_keys=True, separators=(",", ":")),
        ]


def format_row(sample_id, label, values) -> str:
    return ",".join([str(sample_id), str(int(label))] + [format_value(v) for v in values])


def write_header(fh, kind, params, n_features):
    stub = FeatureFile(kind, params, [], np.zeros(0), np.zeros((0, n_features)))
    for line in stub.header_lines():
        fh.write(line + "\n")
    fh.write(",".join(["id", "label"] + column_names(n_features)) + "\n")


def write_feature_file(ff: FeatureFile, path) -> None:
    """Write rows sorted by sample id, replacing ``path`` atomically."""
    order = sorted(range(len(ff.ids)), key=lambda i: ff.ids[i])
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        write_header(fh, ff.kind, ff.params, ff.n_features)
        for i in order:
            fh.write(format_row(ff.ids[i], ff.labels[i], ff.values[i]) + "\n")
    os.replace(tmp, path)


def read_header(path) -> tuple[dict, list[str]]:
    meta = {}
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value
                continue
            columns = line.rstrip("\r\n").split(",")
            break
        else:
            raise FeatureFileError(f"{path}: missing column header")
    missing = {"kind", "version", "fingerprint", "params"} - set(meta)
    if missing or columns[:2] != ["id", "label"]:
        raise FeatureFileError(f"{path}: not a feature file (missing {sorted(missing) or 'id,label'})")
    meta["params"] = json.loads(meta["params"])
    return meta, columns


def read_feature_file(path) -> FeatureFile:
    meta, columns = read_header(path)
    width = len(columns)
    ids, labels, rows = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        next(reader)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != width:
                raise FeatureFileError(f"{path}: row {lineno} has {len(row)} fields, expected {width}")
            ids.append(row[0])
            labels.append(int(row[1]))
            rows.append(np.array(row[2:], dtype=float))
    values = np.vstack(rows) if rows else np.zeros((0, width - 2))
    ff = FeatureFile(meta["kind"], meta["params"], ids, np.array(labels, dtype=np.int64),
                     values, version=meta["version"])
    if ff.fingerprint != meta["fingerprint"]:
        raise FeatureFileError(f"{path}: fingerprint does not match the recorded parameters")
    return ff
