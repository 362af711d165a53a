"""File formats: sample files, spectrum CSV, estimate JSON, configs, manifests."""

import csv
import hashlib
import json
import platform
import sys
from pathlib import Path

import numpy as np

from .deconvolution import DeconvEstimate
from .exceptions import DataFormatError
from .spectral import CircularSample, SpectralVector

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def fmt(x):
    """17 significant digits: round-trips any float64 exactly."""
    return format(float(x), ".17g")


def read_sample_file(path):
    """Read newline-delimited values in [0, 1); '#' lines and blanks are skipped."""
    values = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"{path}: cannot read sample: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                v = float(text)
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not (0.0 <= v < 1.0):
                raise DataFormatError(f"{path}:{lineno}: value outside [0,1): {text}")
            values.append(v)
    if not values:
        raise DataFormatError(f"{path}: empty sample")
    return CircularSample(np.array(values))


def write_sample_file(path, sample, header=None):
    values = sample.values if isinstance(sample, CircularSample) else np.asarray(sample)
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for v in values:
            fh.write(fmt(v) + "\n")


def write_spectrum_csv(path, spec):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "re", "im"])
        for j, c in zip(spec.indices, spec.coeffs):
            writer.writerow([int(j), fmt(c.real), fmt(c.imag)])


def read_spectrum_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["j", "re", "im"]:
            raise DataFormatError(f"{path}: expected header j,re,im, got {header}")
        rows = [row for row in reader if row]
    try:
        js = [int(r[0]) for r in rows]
        coeffs = [complex(float(r[1]), float(r[2])) for r in rows]
    except (ValueError, IndexError) as exc:
        raise DataFormatError(f"{path}: bad row: {exc}") from None
    if not js:
        raise DataFormatError(f"{path}: no coefficients")
    K = js[-1]
    if js != list(range(-K, K + 1)):
        raise DataFormatError(f"{path}: rows must cover j = -K..K in ascending order")
    return SpectralVector(np.array(coeffs))


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


def write_estimate_json(path, est):
    write_json(path, est.to_dict())


def read_estimate_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return DeconvEstimate.from_dict(json.load(fh))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"{path}: malformed estimate: {exc}") from None


def write_grid_csv(path, x, values, column="f_hat"):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", column])
        for xi, vi in zip(x, values):
            writer.writerow([fmt(xi), fmt(vi)])


def write_trace_csv(path, selection):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "contrast", "penalty", "criterion"])
        for k, c, p, crit in selection.trace_rows():
            writer.writerow([k, fmt(c), fmt(p), fmt(crit)])


def write_replications_csv(path, report):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replication", "k_hat", "risk"])
        for i, (k, r) in enumerate(zip(report.k_hats, report.risks)):
            writer.writerow([i, int(k), fmt(r)])


def load_config_file(path):
    """Load a JSON or TOML mapping (chosen by file extension)."""
    path = Path(path)
    try:
        if path.suffix.lower() == ".toml":
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise DataFormatError(f"{path}: cannot parse config: {exc}") from None
    if not isinstance(data, dict):
        raise DataFormatError(f"{path}: config must be a mapping")
    return data


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, argv, inputs=(), **extra):
    """Record what is needed to re-run a command bit-identically."""
    from . import __version__

    manifest = {
        "argv": list(argv),
        "circdeconv_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "inputs": {str(p): sha256_file(p) for p in inputs},
    }
    manifest.update(extra)
    write_json(Path(out_dir) / "manifest.json", manifest)
    return manifest
