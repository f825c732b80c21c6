import csv
import json

import numpy as np
import pytest

from fourierspi import fileio
from fourierspi.acquisition import DetectorModel, acquire_scanline
from fourierspi.cli import main, sweep_m
from fourierspi.config import ConfigError, load_config
from fourierspi.illumination import plan_frequencies
from fourierspi.reconstruction import reconstruct_from_records

from conftest import lowpass_oracle


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def scene_file(tmp_path, rng):
    x = rng.uniform(0, 1, 64)
    path = tmp_path / "scene.csv"
    fileio.write_scene_csv(path, x)
    return x, path


class TestPatterns:
    def test_default_plan(self, tmp_path):
        assert run("patterns", "-o", tmp_path) == 0
        assert len(list(tmp_path.glob("pattern_k*.csv"))) == 80
        pats = fileio.read_pattern_manifest(tmp_path / "patterns_manifest.txt")
        assert len(pats) == 80
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["config"]["m"] == 80 and manifest["command"] == "patterns"

    def test_dc_only(self, tmp_path):
        assert run("patterns", "-o", tmp_path, "--m", 4) == 0
        assert len(list(tmp_path.glob("pattern_k*.csv"))) == 4

    def test_bad_m(self, tmp_path, capsys):
        assert run("patterns", "-o", tmp_path, "--m", 3) == 1
        assert "multiple of 4" in capsys.readouterr().err


class TestAcquireReconstruct:
    def test_pipeline_matches_memory(self, tmp_path, scene_file):
        x, path = scene_file
        assert run("acquire", path, "-o", tmp_path / "a", "--m", 32) == 0
        recs = fileio.read_records_csv(tmp_path / "a" / "records.csv")
        assert recs == acquire_scanline(x, plan_frequencies(32, 64), DetectorModel())
        assert run("reconstruct", tmp_path / "a" / "records.csv", "-o", tmp_path / "r",
                   "--n", 64) == 0
        got = fileio.read_scene_csv(tmp_path / "r" / "scene.csv")
        np.testing.assert_array_equal(got, reconstruct_from_records(recs, 64).scene.pixels)
        assert np.max(np.abs(got - lowpass_oracle(x, range(8)))) < 1e-9
        manifest = json.loads((tmp_path / "r" / "manifest.json").read_text())
        assert manifest["result"]["wall_time_s"] >= 0
        assert manifest["result"]["scale_k"] == 2

    def test_full_band_with_gain(self, tmp_path, scene_file):
        x, path = scene_file
        flags = ["--gain-k", 0.5, "--contrast-b", 0.25, "--offset-a", 0.3, "--m", 4 * 33]
        assert run("acquire", path, "-o", tmp_path, *flags) == 0
        assert run("reconstruct", tmp_path / "records.csv", "-o", tmp_path, "--n", 64,
                   *flags) == 0
        assert np.max(np.abs(fileio.read_scene_csv(tmp_path / "scene.csv") - x)) < 1e-9

    def test_noisy_seeded(self, tmp_path, scene_file):
        _, path = scene_file
        for d in ("a", "b"):
            assert run("acquire", path, "-o", tmp_path / d, "--noise-sigma", 0.1,
                       "--seed", 5, "--m", 16) == 0
        a = (tmp_path / "a" / "records.csv").read_bytes()
        assert a == (tmp_path / "b" / "records.csv").read_bytes()

    def test_empty_records_give_zero_scene(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(",".join(fileio.RECORD_HEADER) + "\n")
        assert run("reconstruct", path, "-o", tmp_path, "--n", 16) == 0
        np.testing.assert_array_equal(fileio.read_scene_csv(tmp_path / "scene.csv"), 0)

    def test_malformed_row(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("seq,t,k,phase,value\n0,0.0,0,0,1.0\n1,2e-8,0,1\n")
        assert run("reconstruct", path, "-o", tmp_path) == 1
        assert "bad.csv:3:" in capsys.readouterr().err

    def test_incomplete_quad(self, tmp_path, capsys):
        path = tmp_path / "r.csv"
        path.write_text("seq,t,k,phase,value\n0,0.0,1,0,1.0\n")
        assert run("reconstruct", path, "-o", tmp_path, "--n", 8) == 1
        assert "k=[1]" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run("reconstruct", tmp_path / "nope.csv", "-o", tmp_path) == 2

    def test_negative_scene_rejected(self, tmp_path):
        path = tmp_path / "neg.csv"
        fileio.write_scene_csv(path, [0.0, -1.0, 0.0, 0.0])
        assert run("acquire", path, "-o", tmp_path, "--m", 4) == 1


class TestSweep:
    def test_default_chart_monotone(self, tmp_path):
        assert run("sweep", "-o", tmp_path) == 0
        body = rows(tmp_path / "sweep.csv")
        assert body[0] == ["ratio", "m", "psnr_db"]
        assert [int(r[1]) for r in body[1:]] == [40, 60, 80, 120, 200]
        psnrs = [float(r[2]) for r in body[1:]]
        assert all(a < b for a, b in zip(psnrs, psnrs[1:]))

    def test_single_ratio_and_rounding(self, tmp_path, scene_file):
        _, path = scene_file
        assert run("sweep", path, "-o", tmp_path, "--ratios", "0.3") == 0
        body = rows(tmp_path / "sweep.csv")
        # 0.3 * 64 = 19.2 rounds down to 16
        assert body[1:] == [["0.3", "16", body[1][2]]]

    def test_rows_sorted(self, tmp_path, scene_file):
        _, path = scene_file
        assert run("sweep", path, "-o", tmp_path, "--ratios", "0.5,0.25") == 0
        assert [r[0] for r in rows(tmp_path / "sweep.csv")[1:]] == ["0.25", "0.5"]

    def test_full_band(self, tmp_path, scene_file):
        _, path = scene_file
        assert run("sweep", path, "-o", tmp_path, "--ratios", "full") == 0
        (ratio, m, p), = rows(tmp_path / "sweep.csv")[1:]
        assert int(m) == 4 * 33
        # exact reconstruction up to round-off
        assert float(p) > 250

    def test_sweep_m(self):
        assert sweep_m(0.10, 800) == 80
        assert sweep_m(0.075, 800) == 60
        assert sweep_m(1.0, 800) == 800
        assert sweep_m("full", 800) == 1604
        assert sweep_m(5.0, 16) == 36


class TestFlow:
    def test_outputs(self, tmp_path, rng):
        img = rng.uniform(0, 1, (6, 64))
        fileio.write_image_csv(tmp_path / "img.csv", img)
        assert run("flow", tmp_path / "img.csv", "-o", tmp_path, "--m-values", "20,40") == 0
        frames = rows(tmp_path / "frames.csv")
        assert frames[0] == ["frame", "m", "psnr_db"]
        assert len(frames) - 1 == 5
        recon = fileio.read_pgm(tmp_path / "flow_reconstruction.pgm", raw=True)
        assert recon.shape == (5, 64)
        sweep = rows(tmp_path / "flow_sweep.csv")
        assert [r[0] for r in sweep[1:]] == ["20", "40", "80"]
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["result"]["frame_rate_hz"] == 625e3
        assert manifest["result"]["records_consumed"] == 5 * 80

    def test_static_flow_matches_oracle(self, tmp_path, rng):
        row = rng.uniform(0, 1, 64)
        fileio.write_image_csv(tmp_path / "img.csv", np.tile(row, (3, 1)))
        assert run("flow", tmp_path / "img.csv", "-o", tmp_path, "--flow-speed", 0,
                   "--m", 32, "--m-values", "32") == 0
        # PSNR against truth of the band-limited estimate is finite and identical per frame
        psnrs = {r[2] for r in rows(tmp_path / "frames.csv")[1:]}
        assert len(psnrs) == 1


def test_bench_small(tmp_path):
    assert run("bench", "-o", tmp_path, "--runs", 3, "--warmup", 1, "--n", 64, "--m", 16) == 0
    body = rows(tmp_path / "bench.csv")
    assert body[0] == ["method", "run", "seconds"]
    assert sorted({r[0] for r in body[1:]}) == ["gpsr", "idft", "twist"]
    assert len(body) - 1 == 9
    summary = json.loads((tmp_path / "manifest.json").read_text())["result"]
    assert summary["warmup_runs_excluded"] == 1
    assert set(summary["median_seconds"]) == {"idft", "twist", "gpsr"}


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nm = 8  # trailing\nn = 16\n")
    assert run("patterns", "--config", cfg, "-o", tmp_path, "--m", 12) == 0
    assert len(list(tmp_path.glob("pattern_k*.csv"))) == 12
    assert json.loads((tmp_path / "manifest.json").read_text())["config"]["n"] == 16


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    bad.write_text("n = seven\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    assert run("patterns", "--config", bad, "-o", tmp_path) == 1
    assert run("patterns", "--config", tmp_path / "missing.cfg", "-o", tmp_path) == 2


@pytest.mark.parametrize("command", ["patterns", "acquire", "reconstruct", "sweep", "flow", "bench"])
def test_deterministic_csv_bodies(tmp_path, scene_file, command):
    x, path = scene_file
    fileio.write_records_csv(tmp_path / "recs.csv",
                             acquire_scanline(x, plan_frequencies(16, 64),
                                              DetectorModel(noise_sigma=0.1, rng_seed=2)))
    img = tmp_path / "img.csv"
    fileio.write_image_csv(img, np.tile(x, (4, 1)))
    args = {
        "patterns": ["--n", 16, "--m", 8],
        "acquire": [path, "--m", 16, "--noise-sigma", 0.2, "--seed", 3],
        "reconstruct": [tmp_path / "recs.csv", "--n", 64],
        "sweep": [path, "--noise-sigma", 0.05, "--seed", 1],
        "flow": [img, "--m-values", "20", "--noise-sigma", 0.05],
        "bench": ["--runs", 2, "--warmup", 0, "--n", 32, "--m", 8],
    }[command]
    outs = []
    for d in ("one", "two"):
        assert run(command, *args, "-o", tmp_path / d) == 0
        outs.append(tmp_path / d)
    files = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*.csv"))
    assert files
    for rel in files:
        a = (outs[0] / rel).read_text().splitlines()
        b = (outs[1] / rel).read_text().splitlines()
        if rel.name == "bench.csv":
            # wall-clock seconds are measurements, not outputs; compare the keys
            a = [r.rsplit(",", 1)[0] for r in a]
            b = [r.rsplit(",", 1)[0] for r in b]
        assert a == b, rel
    for rel in sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*.pgm")):
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes()
