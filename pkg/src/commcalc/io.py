"""Matrix JSON files, canonical float formatting, trajectory CSV and run configuration."""

import csv
import io as _io
import json
import math
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from .exceptions import CommCalcError


class ConfigError(CommCalcError):
    """Malformed input file or configuration (CLI exit code 1)."""


def canonical_float(x, digits=None, ref=None):
    """Shortest round-trip value of ``x``, with ``-0.0`` mapped to ``0.0``.

    With ``digits`` the value is first rounded to ``digits`` significant
    digits relative to the magnitude ``ref`` (typically the largest entry of
    the matrix), which makes outputs of mathematically equal computations
    byte-comparable.
    """
    x = float(x)
    if digits is not None and x != 0.0 and math.isfinite(x):
        ref = abs(ref) if ref else abs(x)
        places = digits - 1 - int(math.floor(math.log10(ref)))
        x = round(x, places)
    if x == 0.0:
        x = 0.0
    return x


def canonical_matrix(M, digits=None):
    M = np.asarray(M, dtype=float)
    ref = float(np.max(np.abs(M))) if M.size else 1.0
    return [[canonical_float(v, digits, ref) for v in row] for row in M]


def read_matrix(path):
    """Read ``{"d": int, "entries": [[...], ...]}`` (row-major)."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from exc
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ConfigError(f"{path}: expected an object with 'd' and 'entries'")
    try:
        M = np.array(obj["entries"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: entries are not numeric") from exc
    d = obj.get("d", M.shape[0] if M.ndim else 0)
    if M.ndim != 2 or M.shape != (d, d):
        raise ConfigError(f"{path}: entries must form a {d}x{d} array, got shape {M.shape}")
    return M


def matrix_document(M, digits=None, provenance=None):
    M = np.asarray(M, dtype=float)
    doc = {"d": int(M.shape[0]), "entries": canonical_matrix(M, digits)}
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"


def write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def write_matrix(path, M, digits=None, provenance=None):
    write_text(path, dumps(matrix_document(M, digits, provenance)))


def trajectory_rows(traj, digits=None):
    """Header and rows: ``t``, state entries row-major, optional ``cross_residual``."""
    d = traj.states.shape[1]
    sym = traj.representation
    header = ["t"] + [f"{sym}{i + 1}{j + 1}" for i in range(d) for j in range(d)]
    if traj.cross_residual is not None:
        header.append("cross_residual")
    rows = []
    for k, t in enumerate(traj.times):
        row = [canonical_float(t)] + [canonical_float(v, digits) for v in traj.states[k].ravel()]
        if traj.cross_residual is not None:
            row.append(canonical_float(traj.cross_residual[k]))
        rows.append(row)
    return header, rows


def write_trajectory(path, traj, digits=None):
    header, rows = trajectory_rows(traj, digits)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) for v in row])
    write_text(path, buf.getvalue())


@dataclass
class RunConfig:
    """Settings of one CLI run; unknown keys in a config file are rejected."""

    command: str = ""
    fn: str = None
    param: float = None
    kind: str = "commutator"
    method: str = "spectral"
    variant: str = "dk"
    inputs: dict = field(default_factory=dict)
    out: str = None
    digits: int = None
    tol: float = 1e-8
    seed: int = 0
    samples: int = None
    workers: int = 1
    only: list = None
    model: str = None
    flow: str = None
    tau: float = 1.0
    dt: float = None
    T: float = 1.0
    paired: bool = False
    r: float = None
    N: int = 12
    expr: str = None
    derivative_expr: str = None
    extension: list = None

    @classmethod
    def keys(cls):
        return {f.name for f in fields(cls)}

    @classmethod
    def from_mapping(cls, mapping):
        unknown = set(mapping) - cls.keys()
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
        return cls(**mapping)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(obj, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_mapping(obj)
