import math
import os

import numpy as np
import pytest

from landbands.bands import empirical_quantile, load_band
from landbands.bifiltration import save_bifiltration
from landbands.cli import main
from landbands.landscape import (Grid, LandscapeGrid, load_landscape_grid,
                                 save_landscape_grid)
from oracles import assert_landscape_invariants, bifiltration_from_dict


def _read_bytes(directory):
    return {fn: (directory / fn).read_bytes()
            for fn in sorted(os.listdir(directory))}


def _gen(outdir, seed=5, n=30, samples=2, extra=()):
    rc = main(["generate", "--shape", "torus", "--N", str(n), "--R", "3.0",
               "--r", "0.7", "--samples", str(samples), "--seed", str(seed),
               "--out", str(outdir), *extra])
    assert rc == 0


# ---------------------------------------------------------------------------
# generate


def test_generate_outputs_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    _gen(a)
    _gen(b)
    files = _read_bytes(a)
    assert sorted(files) == ["torus_000.csv", "torus_001.csv"]
    assert files == _read_bytes(b)
    assert files["torus_000.csv"] != files["torus_001.csv"]
    lines = files["torus_000.csv"].decode().splitlines()
    assert lines[0] == "x,y,z"
    assert len(lines) == 31


def test_generate_seed_changes_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    _gen(a, seed=5, samples=1)
    _gen(b, seed=6, samples=1)
    assert _read_bytes(a)["torus_000.csv"] != _read_bytes(b)["torus_000.csv"]


def test_generate_rejects_bad_radius(tmp_path):
    assert main(["generate", "--shape", "sphere", "--N", "10", "--R", "0",
                 "--out", str(tmp_path)]) == 2


# ---------------------------------------------------------------------------
# landscape


def test_landscape_mph_grid_document(tmp_path):
    clouds = tmp_path / "clouds"
    _gen(clouds, samples=1)
    out = tmp_path / "grids"
    rc = main(["landscape", str(clouds / "torus_000.csv"), "--m", "8",
               "--T", "1.0", "--degree", "1", "--out", str(out)])
    assert rc == 0
    lg = load_landscape_grid(out / "torus_000.grid")
    assert lg.grid == Grid(T=1.0, m=8, d=2)
    assert_landscape_invariants(lg)


def test_landscape_threads_are_byte_identical(tmp_path):
    clouds = tmp_path / "clouds"
    _gen(clouds, samples=1)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        rc = main(["landscape", str(clouds / "torus_000.csv"), "--m", "10",
                   "--degree", "1", "--threads", threads, "--out", str(out),
                   "--csv"])
        assert rc == 0
        outs.append(_read_bytes(out))
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"torus_000.grid", "torus_000.csv"}


def test_landscape_sph_mode(tmp_path):
    clouds = tmp_path / "clouds"
    _gen(clouds, samples=1)
    out = tmp_path / "grids"
    rc = main(["landscape", str(clouds / "torus_000.csv"), "--mode", "sph",
               "--m", "12", "--T", "2.0", "--degree", "1", "--out", str(out)])
    assert rc == 0
    lg = load_landscape_grid(out / "torus_000.grid")
    assert lg.grid.d == 1
    assert lg.grid.T == 2.0
    assert_landscape_invariants(lg)


def test_landscape_missing_input_is_io_error(tmp_path):
    assert main(["landscape", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path)]) == 3


def test_landscape_bad_degree_is_validation_error(tmp_path):
    clouds = tmp_path / "clouds"
    _gen(clouds, samples=1)
    assert main(["landscape", str(clouds / "torus_000.csv"), "--degree", "-1",
                 "--out", str(tmp_path / "g")]) == 2


# ---------------------------------------------------------------------------
# band


def _fake_grids(directory, levels, m=6, jitter=0.0, seed=0):
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    grid = Grid(T=1.0, m=m, d=2)
    for i, level in enumerate(levels):
        vals = np.full((m, m), level) + jitter * rng.uniform(0, 1, (m, m))
        lg = LandscapeGrid(grid=grid, k=1, degree=1, values=vals)
        save_landscape_grid(directory / f"s{i:02d}.grid", lg)


def test_band_z_matches_dumped_thetas(tmp_path, capsys):
    grids = tmp_path / "grids"
    _fake_grids(grids, [0.1, 0.2, 0.3, 0.4, 0.25], jitter=0.05)
    out = tmp_path / "band"
    inputs = sorted(str(grids / fn) for fn in os.listdir(grids))
    rc = main(["band", *inputs, "--method", "standard", "--B", "40",
               "--alpha", "0.1", "--dump-theta", "--seed", "9", "--out", str(out)])
    assert rc == 0
    printed = capsys.readouterr().out
    band = load_band(out / "band.txt")
    assert f"z_tilde={band.z_tilde:.17g} n=5" in printed
    thetas = [float(line) for line in (out / "theta.txt").read_text().split()]
    assert len(thetas) == 40
    assert band.z_tilde == empirical_quantile(np.asarray(thetas), 0.1)
    halfwidth = band.z_tilde / math.sqrt(5)
    assert np.array_equal(band.upper, band.mean.values + halfwidth)


def test_band_rerun_is_byte_identical(tmp_path):
    grids = tmp_path / "grids"
    _fake_grids(grids, [0.1, 0.3, 0.2], jitter=0.02)
    inputs = sorted(str(grids / fn) for fn in os.listdir(grids))
    outs = []
    for name in ("one", "two"):
        out = tmp_path / name
        rc = main(["band", *inputs, "--B", "25", "--seed", "3",
                   "--csv", "--out", str(out)])
        assert rc == 0
        outs.append(_read_bytes(out))
    assert outs[0] == outs[1]


def test_band_validation_exit_codes(tmp_path):
    grids = tmp_path / "grids"
    _fake_grids(grids, [0.1, 0.3])
    inputs = sorted(str(grids / fn) for fn in os.listdir(grids))
    assert main(["band", *inputs, "--alpha", "1.5", "--out", str(tmp_path / "x")]) == 2
    assert main(["band", inputs[0], "--out", str(tmp_path / "y")]) == 2
    assert main(["band", str(grids / "missing.grid"),
                 "--out", str(tmp_path / "z")]) == 3


# ---------------------------------------------------------------------------
# classify


def test_classify_end_to_end(tmp_path, capsys):
    _fake_grids(tmp_path / "low", [0.1] * 4)
    _fake_grids(tmp_path / "high", [0.8] * 4)
    out = tmp_path / "cv"
    rc = main(["classify", "--class", f"low={tmp_path / 'low'}",
               "--class", f"high={tmp_path / 'high'}", "--folds", "2",
               "--B", "20", "--out", str(out)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "accuracy 1.00 ± 0.00"
    results = (out / "results.txt").read_text().splitlines()
    assert results[1] == "classes=low,high"
    assert results[-1] == "summary: 1.00 ± 0.00"
    confusion = (out / "confusion.csv").read_text().splitlines()
    assert confusion[1] == "low,4,0"
    assert confusion[2] == "high,0,4"


def test_classify_validation_exit_codes(tmp_path):
    _fake_grids(tmp_path / "low", [0.1, 0.12])
    _fake_grids(tmp_path / "high", [0.8, 0.82])
    args = ["--class", f"low={tmp_path / 'low'}",
            "--class", f"high={tmp_path / 'high'}"]
    assert main(["classify", *args, "--folds", "3",
                 "--out", str(tmp_path / "a")]) == 2
    assert main(["classify", "--class", "nodir", "--out", str(tmp_path / "b")]) == 2
    assert main(["classify", "--class", f"low={tmp_path / 'nothing'}",
                 "--out", str(tmp_path / "c")]) == 3


# ---------------------------------------------------------------------------
# rank and parser behavior


def test_rank_command(tmp_path, capsys):
    bif = bifiltration_from_dict({
        (0,): (0.0, 0.0), (1,): (0.0, 0.0), (2,): (0.0, 0.0),
        (0, 1): (1.0, 1.0), (0, 2): (1.0, 1.0), (1, 2): (1.0, 1.0),
    }, T=3.0)
    path = tmp_path / "tri.bif"
    save_bifiltration(path, bif)
    assert main(["rank", str(path), "--degree", "1",
                 "--x", "1,1", "--y", "2,2"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["rank", str(path), "--degree", "1",
                 "--x", "2,2", "--y", "1,1"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["rank", str(path), "--degree", "1", "--x", "1;1",
                 "--y", "2,2"]) == 2


def test_parser_exit_codes(capsys):
    assert main(["no-such-command"]) == 2
    assert main(["--help"]) == 0
    capsys.readouterr()
