import numpy as np
import pytest

from fourierspi.acquisition import (AcquisitionError, DetectorModel, acquire_scanline,
                                    acquire_stream, measure)
from fourierspi.illumination import Phase, make_pattern, plan_frequencies
from fourierspi.reconstruction import assemble, calibrate
from fourierspi.spectral import Scene1D

from conftest import literal_dft


def test_zero_scene():
    assert measure(np.zeros(8), make_pattern(2, Phase.P90, 8), DetectorModel()) == 0


def test_delta_scene():
    x = np.zeros(8)
    x[0] = 1
    assert measure(x, make_pattern(1, Phase.P0, 8, 1, 1), DetectorModel()) == pytest.approx(2.0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_constant_scene_integrates_out_cosine(k):
    c, n, a = 0.7, 8, 1.3
    got = measure(np.full(n, c), make_pattern(k, Phase.P0, n, a, 1), DetectorModel())
    assert got == pytest.approx(c * n * a, rel=1e-12)


def test_gain_scales():
    x = np.arange(8.0)
    p = make_pattern(1, Phase.P90, 8)
    assert measure(x, p, DetectorModel(gain_k=2.5)) == pytest.approx(2.5 * (x @ p.samples))


def test_length_mismatch():
    with pytest.raises(AcquisitionError):
        measure(np.zeros(6), make_pattern(1, Phase.P0, 8), DetectorModel())


def test_detector_validation():
    with pytest.raises(AcquisitionError):
        DetectorModel(gain_k=0)
    with pytest.raises(AcquisitionError):
        DetectorModel(noise_sigma=-1)


def test_linearity(rng):
    x, y = rng.normal(size=(2, 64))
    p = make_pattern(5, Phase.P270, 64, 0.9, 0.4)
    det = DetectorModel(gain_k=1.7)
    lhs = measure(2 * x - 3 * y, p, det)
    rhs = 2 * measure(x, p, det) - 3 * measure(y, p, det)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_dc_cancellation_premise(rng):
    n, a, K = 32, 0.6, 1.4
    x = rng.uniform(0, 1, n)
    plan = plan_frequencies(4 * 17, n)
    recs = acquire_scanline(x, plan, DetectorModel(gain_k=K), offset_a=a, contrast_b=0.5)
    for i in range(0, len(recs), 4):
        v0, v90, v180, v270 = (r.value for r in recs[i:i + 4])
        total = 2 * K * a * x.sum()
        assert v0 + v180 == pytest.approx(total, rel=1e-9)
        assert v90 + v270 == pytest.approx(total, rel=1e-9)


class TestScanline:
    def test_dc_plan(self):
        recs = acquire_scanline(np.ones(8), plan_frequencies(4, 8), DetectorModel(), seq0=10)
        assert [r.seq for r in recs] == [10, 11, 12, 13]
        assert [r.phase for r in recs] == [Phase.P0, Phase.P90, Phase.P180, Phase.P270]

    def test_default_frame_duration(self, rng):
        recs = acquire_scanline(rng.uniform(0, 1, 800), plan_frequencies(80, 800), DetectorModel())
        assert len(recs) == 80
        # 80 pulses at 50 MHz span 1.6 us
        assert recs[-1].t + 20e-9 == pytest.approx(1.6e-6, rel=1e-12)
        assert [r.k for r in recs[::4]] == list(range(20))
        for r in recs:
            assert r.t == r.seq * 20e-9

    def test_noiseless_records_give_low_band_dft(self, rng):
        n = 32
        x = rng.uniform(0, 1, n)
        recs = acquire_scanline(x, plan_frequencies(24, n), DetectorModel(gain_k=2.0),
                                contrast_b=0.25)
        spec = calibrate(assemble(recs, n), 2.0, 0.25)
        X = literal_dft(x)
        for k in range(6):
            assert spec.coefficients[k] / spec.scale_k == pytest.approx(X[k], abs=1e-9)

    def test_seeded_noise_reproducible(self, rng):
        x = rng.uniform(0, 1, 64)
        det = DetectorModel(noise_sigma=0.1, rng_seed=99)
        plan = plan_frequencies(16, 64)
        a = [r.value for r in acquire_scanline(x, plan, det)]
        b = [r.value for r in acquire_scanline(x, plan, det)]
        c = [r.value for r in acquire_scanline(x, plan, DetectorModel(noise_sigma=0.1, rng_seed=7))]
        assert a == b
        assert a != c


class TestStream:
    def test_static_frames_identical(self, rng):
        x = Scene1D(rng.uniform(0, 1, 16))
        run = acquire_stream(lambda t: x, plan_frequencies(12, 16), DetectorModel(), 2)
        f0, f1 = run.frames()
        assert [r.value for r in f0] == [r.value for r in f1]
        assert [r.seq for r in run.records] == list(range(24))

    def test_shift_theorem(self, rng):
        n, m = 64, 32
        x = rng.uniform(0, 1, n)
        frame_time = m * 20e-9

        def source(t):
            # one pixel per frame, constant within each frame
            return np.roll(x, int(t // frame_time + 1e-9))

        run = acquire_stream(source, plan_frequencies(m, n), DetectorModel(), 3)
        specs = [assemble(f, n).coefficients for f in run.frames()]
        k = np.arange(m // 4)
        ramp = np.exp(-2j * np.pi * k / n)
        for a, b in zip(specs, specs[1:]):
            np.testing.assert_allclose(b[k], a[k] * ramp, atol=1e-9)

    def test_each_record_sees_its_own_time(self):
        seen = []

        def source(t):
            seen.append(t)
            return np.ones(8)

        acquire_stream(source, plan_frequencies(8, 8), DetectorModel(), 2)
        assert seen == [i * 20e-9 for i in range(16)]

    def test_frozen_mode_samples_once_per_frame(self):
        seen = []

        def source(t):
            seen.append(t)
            return np.ones(8)

        acquire_stream(source, plan_frequencies(8, 8), DetectorModel(), 2, freeze_within_frame=True)
        assert seen == [0.0, 8 * 20e-9]

    def test_out_of_range_propagates(self):
        def source(t):
            if t > 1e-7:
                raise ValueError("past the end")
            return np.ones(8)

        with pytest.raises(ValueError, match="past the end"):
            acquire_stream(source, plan_frequencies(8, 8), DetectorModel(), 10)

    def test_needs_a_frame(self):
        with pytest.raises(AcquisitionError):
            acquire_stream(lambda t: np.ones(8), plan_frequencies(4, 8), DetectorModel(), 0)

    def test_noise_reproducible(self):
        det = DetectorModel(noise_sigma=0.5, rng_seed=3)
        run1 = acquire_stream(lambda t: np.ones(8), plan_frequencies(8, 8), det, 3)
        run2 = acquire_stream(lambda t: np.ones(8), plan_frequencies(8, 8), det, 3)
        assert [r.value for r in run1.records] == [r.value for r in run2.records]
