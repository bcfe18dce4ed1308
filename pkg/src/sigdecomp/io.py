"""CSV/JSON file formats: signal files, decomposition bundles, T-F grids.

Signal CSV layout: a first line ``# sample_rate=<hz>``, a header row of
column names, then one row per sample.  Values are written with repr
round-trip precision (17 significant digits), so write/read cycles are
bit-exact.  One column reads back as a single signal, several as a
multichannel signal.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .core import ContractViolation, Decomposition, MultichannelSignal, Signal
from .spectral import TFGrid


class CsvFormatError(ValueError):
    """Malformed signal file (bad header, ragged or non-numeric rows)."""


def write_signals_csv(
    path: str | Path, columns: dict[str, np.ndarray], sample_rate_hz: float
) -> None:
    """Write named equal-length sample columns with a sample-rate header."""
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=np.float64) for n in names]
    if len({a.size for a in arrays}) != 1:
        raise ContractViolation("all columns must have equal length")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# sample_rate={float(sample_rate_hz)!r}\n")
        fh.write(",".join(names) + "\n")
        for row in zip(*arrays):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_csv_signal(
    path: str | Path, sample_rate_hz: float | None = None
) -> Signal | MultichannelSignal:
    """Read a signal CSV; one column gives a Signal, several a
    MultichannelSignal.

    The sample rate comes from the ``# sample_rate=`` header line unless
    overridden by the argument; missing both is an error.  Rows with
    non-numeric cells or the wrong column count are rejected with their
    line number.
    """
    path = Path(path)
    header_rate: float | None = None
    names: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("sample_rate="):
                    try:
                        header_rate = float(body.split("=", 1)[1])
                    except ValueError as exc:
                        raise CsvFormatError(f"line {lineno}: bad sample_rate header") from exc
                continue
            cells = line.split(",")
            if names is None:
                try:
                    [float(c) for c in cells]
                except ValueError:
                    names = [c.strip() for c in cells]
                    continue
                names = [f"col{i}" for i in range(len(cells))]
            if len(cells) != len(names):
                raise CsvFormatError(
                    f"line {lineno}: expected {len(names)} cells, found {len(cells)}"
                )
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise CsvFormatError(f"line {lineno}: non-numeric cell") from exc
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    rate = sample_rate_hz if sample_rate_hz is not None else header_rate
    if rate is None:
        raise CsvFormatError(f"{path}: no sample_rate header and none supplied")
    data = np.asarray(rows, dtype=np.float64)
    if data.shape[1] == 1:
        return Signal(data[:, 0], rate)
    return MultichannelSignal(data.T, rate)


def _config_to_jsonable(obj) -> object:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _config_to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (tuple, list)):
        return [_config_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def write_decomposition(
    d: Decomposition,
    outdir: str | Path,
    method: str = "",
    config: object = None,
    original: Signal | None = None,
) -> dict:
    """Write one CSV per mode plus the residual and a JSON manifest.

    The manifest records the method name, its configuration, center
    frequencies when present, and the reconstruction error against
    ``original`` when supplied.  Returns the manifest dict.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fs = d.residual.sample_rate_hz
    files = []
    for i, mode in enumerate(d.modes, start=1):
        name = f"mode_{i:02d}.csv"
        write_signals_csv(outdir / name, {f"mode_{i:02d}": mode.samples}, fs)
        files.append(name)
    write_signals_csv(outdir / "residual.csv", {"residual": d.residual.samples}, fs)

    manifest = {
        "method": method,
        "config": _config_to_jsonable(config),
        "sample_rate_hz": fs,
        "n_modes": d.n_modes,
        "mode_files": files,
        "residual_file": "residual.csv",
        "center_freqs_hz": list(d.center_freqs_hz) if d.center_freqs_hz else None,
        "reconstruction_error": (
            d.reconstruction_error(original) if original is not None else None
        ),
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest


def read_decomposition(outdir: str | Path) -> tuple[Decomposition, dict]:
    """Load a decomposition bundle written by :func:`write_decomposition`."""
    outdir = Path(outdir)
    with open(outdir / "manifest.json", "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    modes = []
    for name in manifest["mode_files"]:
        sig = read_csv_signal(outdir / name)
        assert isinstance(sig, Signal)
        modes.append(sig)
    residual = read_csv_signal(outdir / manifest["residual_file"])
    centers = manifest.get("center_freqs_hz")
    d = Decomposition(
        modes=tuple(modes),
        residual=residual,
        center_freqs_hz=tuple(centers) if centers else None,
    )
    return d, manifest


def write_tfgrid_csv(path: str | Path, grid: TFGrid) -> None:
    """T-F grid as CSV: first row the frequencies, first column the times."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("time_s," + ",".join(repr(float(f)) for f in grid.freqs_hz) + "\n")
        for j, t in enumerate(grid.times_s):
            fh.write(repr(float(t)) + "," + ",".join(repr(float(v)) for v in grid.energy[:, j]) + "\n")
