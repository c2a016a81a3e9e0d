"""File formats: observation-series CSV with JSON sidecar, study reports,
manifests with content hashes.

Series CSV schema: header ``i,T,Y,increment``, one row per observation,
``i`` counting from 1.  The sidecar ``<name>.json`` carries at least
``eps`` (mandatory: increments are stored rescaled) and optionally
``horizon``, ``alpha``, ``model``, ``time_change``, ``seed``.  Floats are
written with repr (shortest round-trip), so ingest followed by re-write is
byte-identical.
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import BarrierViolationError, MonotonicityError, SchemaError
from .simulate import ObservationSeries

SERIES_COLUMNS = ("i", "T", "Y", "increment")


def _fmt(x: float) -> str:
    return repr(float(x))


def canonical_json(obj) -> str:
    """Deterministic JSON encoding (sorted keys, no whitespace)."""

    def default(o):
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, Path):
            return str(o)
        return repr(o)

    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=default)


def config_hash(cfg) -> str:
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_series(series: ObservationSeries, csv_path, meta=None) -> list[Path]:
    """Write the CSV plus sidecar; returns the paths written."""
    csv_path = Path(csv_path)
    lines = [",".join(SERIES_COLUMNS)]
    for i in range(len(series)):
        lines.append(
            f"{i + 1},{_fmt(series.times[i])},{_fmt(series.values[i])},"
            f"{_fmt(series.increments[i])}"
        )
    csv_path.write_text("\n".join(lines) + "\n")

    side = {"eps": float(series.eps), "horizon": float(series.horizon)}
    side.update(meta or {})
    sc = sidecar_path(csv_path)
    sc.write_text(canonical_json(side) + "\n")
    return [csv_path, sc]


def ingest_series(csv_path) -> ObservationSeries:
    """Read and validate a series CSV (with its sidecar) row by row.

    Violations are reported with the offending row's ``i`` value:
    SchemaError for malformed files, MonotonicityError for non-increasing
    times, BarrierViolationError for |increment| < 1 (tolerance 1e-9).
    """
    csv_path = Path(csv_path)
    sc = sidecar_path(csv_path)
    if not sc.exists():
        raise SchemaError(f"missing sidecar {sc}")
    try:
        side = json.loads(sc.read_text())
        eps = float(side["eps"])
    except (ValueError, KeyError, TypeError) as exc:
        raise SchemaError(f"sidecar {sc} must provide numeric 'eps': {exc}") from exc

    text = csv_path.read_text().strip().splitlines()
    if not text or text[0].strip() != ",".join(SERIES_COLUMNS):
        raise SchemaError(
            f"expected header {','.join(SERIES_COLUMNS)!r}, got {text[0].strip()!r}"
            if text else "empty file"
        )
    rows = []
    for lineno, line in enumerate(text[1:], start=1):
        parts = line.split(",")
        if len(parts) != 4:
            raise SchemaError(f"row {lineno}: expected 4 fields, got {len(parts)}")
        try:
            rows.append((int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3])))
        except ValueError as exc:
            raise SchemaError(f"row {lineno}: {exc}") from exc

    times = np.array([r[1] for r in rows])
    values = np.array([r[2] for r in rows])
    incs = np.array([r[3] for r in rows])

    prev = 0.0
    for (i, t_i, _, inc) in rows:
        if t_i <= prev:
            raise MonotonicityError("observation times must increase", row=i)
        if abs(inc) < 1.0 - 1e-9:
            raise BarrierViolationError("rescaled increment below barrier", row=i)
        prev = t_i

    horizon = float(side.get("horizon", times[-1] if len(rows) else 1.0))
    return ObservationSeries(eps=eps, horizon=horizon, times=times,
                             values=values, increments=incs)


def write_report(report, outdir, plot_data: bool = False) -> list[Path]:
    """Write a StudyReport as JSON plus flat CSV (one row per eps/quantity)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    jpath = outdir / f"{report.kind}.json"
    jpath.write_text(canonical_json(report.to_dict()) + "\n")
    written.append(jpath)

    cpath = outdir / f"{report.kind}.csv"
    header = ("eps", "quantity", "estimate", "se", "oracle", "oracle_se")
    lines = [",".join(header)]
    for row in report.rows:
        lines.append(",".join([
            _fmt(row["eps"]), str(row["quantity"]), _fmt(row["estimate"]),
            _fmt(row["se"]),
            _fmt(row["oracle"]) if row.get("oracle") is not None else "",
            _fmt(row["oracle_se"]) if row.get("oracle_se") is not None else "",
        ]))
    cpath.write_text("\n".join(lines) + "\n")
    written.append(cpath)

    if plot_data and report.samples:
        ppath = outdir / f"{report.kind}_samples.csv"
        lines = ["series,index,value"]
        for name in sorted(report.samples):
            for idx, v in enumerate(report.samples[name]):
                lines.append(f"{name},{idx},{_fmt(v)}")
        ppath.write_text("\n".join(lines) + "\n")
        written.append(ppath)
    return written


def write_manifest(outdir, command: str, cfg, seed, files, workers: int,
                   version: str) -> Path:
    """Record config hash, seed and content hashes of every output file."""
    outdir = Path(outdir)
    manifest = {
        "command": command,
        "config": cfg,
        "config_hash": config_hash(cfg),
        "seed": int(seed) if seed is not None else None,
        "workers": int(workers),
        "version": version,
        "rng_contract": "SeedSequence(seed, spawn_key=(purpose, replicate)); "
                        "purposes: 0=process, 1=time-change, 2=oracle, 3=aux",
        "files": {Path(p).name: file_sha256(p) for p in files},
    }
    mpath = outdir / "manifest.json"
    mpath.write_text(canonical_json(manifest) + "\n")
    return mpath
