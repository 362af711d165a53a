import json

import numpy as np
import pytest

from circdeconv.deconvolution import deconvolve
from circdeconv.exceptions import DataFormatError
from circdeconv.io import (fmt, load_config_file, read_estimate_json, read_sample_file,
                           read_spectrum_csv, sha256_file, write_estimate_json, write_manifest,
                           write_sample_file, write_spectrum_csv)
from circdeconv.spectral import CircularSample, SpectralVector


def test_sample_file_comments(tmp_path):
    p = tmp_path / "y.txt"
    p.write_text("# header\n0.25\n\n  0.5 \n# tail\n0\n")
    np.testing.assert_array_equal(read_sample_file(p).values, [0.25, 0.5, 0.0])


@pytest.mark.parametrize("body,msg", [
    ("0.1\nabc\n", "not a number"),
    ("0.1\n1.0\n", "outside"),
    ("-0.2\n", "outside"),
    ("# only\n", "empty"),
])
def test_sample_file_errors(tmp_path, body, msg):
    p = tmp_path / "y.txt"
    p.write_text(body)
    with pytest.raises(DataFormatError, match=msg):
        read_sample_file(p)


def test_missing_sample(tmp_path):
    with pytest.raises(DataFormatError, match="cannot read"):
        read_sample_file(tmp_path / "nope.txt")


def test_sample_roundtrip(tmp_path, rng):
    values = rng.random(50)
    p = tmp_path / "y.txt"
    write_sample_file(p, CircularSample(values), header="draws")
    np.testing.assert_array_equal(read_sample_file(p).values, values)


def test_fmt_exact(rng):
    for v in rng.normal(size=100):
        assert float(fmt(v)) == v


def test_spectrum_roundtrip(tmp_path, rng):
    spec = SpectralVector.from_nonnegative(np.concatenate([[1], rng.normal(size=6) + 1j * rng.normal(size=6)]))
    p = tmp_path / "s.csv"
    write_spectrum_csv(p, spec)
    back = read_spectrum_csv(p)
    np.testing.assert_array_equal(back.coeffs, spec.coeffs)


@pytest.mark.parametrize("body,msg", [
    ("a,b,c\n0,1,0\n", "header"),
    ("j,re,im\n", "no coefficients"),
    ("j,re,im\n-1,0,0\n1,0,0\n", "cover"),
    ("j,re,im\n0,x,0\n", "bad row"),
])
def test_spectrum_errors(tmp_path, body, msg):
    p = tmp_path / "s.csv"
    p.write_text(body)
    with pytest.raises(DataFormatError, match=msg):
        read_spectrum_csv(p)


def test_estimate_json_lossless(tmp_path, rng):
    g = SpectralVector.from_nonnegative(np.concatenate([[1], 0.3 * rng.normal(size=5) + 0.1j]))
    phi = SpectralVector.from_nonnegative([1, 0.9, 0.05, 0.5, 0.01, 0.4])
    est = deconvolve(g, phi, 100, 5)
    p = tmp_path / "e.json"
    write_estimate_json(p, est)
    back = read_estimate_json(p)
    np.testing.assert_array_equal(back.spectrum.coeffs, est.spectrum.coeffs)
    assert back.threshold_hits == est.threshold_hits and back.m == est.m


def test_estimate_json_malformed(tmp_path):
    p = tmp_path / "e.json"
    p.write_text('{"k": 1}')
    with pytest.raises(DataFormatError, match="malformed"):
        read_estimate_json(p)


def test_config_formats(tmp_path):
    t = tmp_path / "c.toml"
    t.write_text('n = 100\nmode = "empirical"\n[f_model]\nkind = "wrapped_normal"\nsigma = 0.1\n')
    j = tmp_path / "c.json"
    j.write_text(json.dumps({"n": 100, "mode": "empirical",
                             "f_model": {"kind": "wrapped_normal", "sigma": 0.1}}))
    assert load_config_file(t) == load_config_file(j)
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(DataFormatError, match="mapping"):
        load_config_file(bad)
    broken = tmp_path / "broken.toml"
    broken.write_text("n = = 1")
    with pytest.raises(DataFormatError, match="cannot parse"):
        load_config_file(broken)


def test_manifest(tmp_path):
    inp = tmp_path / "y.txt"
    inp.write_text("0.5\n")
    write_manifest(tmp_path, ["estimate", "--y", str(inp)], inputs=[inp], seed=3)
    data = json.loads((tmp_path / "manifest.json").read_text())
    assert data["argv"][0] == "estimate" and data["seed"] == 3
    assert data["inputs"][str(inp)] == sha256_file(inp)
    assert len(sha256_file(inp)) == 64
