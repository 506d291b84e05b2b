import numpy as np

from data_manager.normalizer import NormStats, denormalize, normalize
from data_manager.test.factory import random_window


def test_full_frame_box():
    stats = NormStats()

    assert np.array_equal(stats.normalize_boxes([0., 0., 455., 256.]), [0., 0., 1., 1.])


def test_round_trip():
    rng = np.random.default_rng(0)
    window = random_window(rng)
    stats = NormStats(imu_mean=rng.normal(size=6), imu_std=rng.uniform(0.5, 2., 6))

    normalized = normalize(window, stats)
    restored = denormalize(normalized, stats)

    assert normalized.normalized and not restored.normalized
    assert np.all((normalized.boxes >= 0.) & (normalized.boxes <= 1.))
    np.testing.assert_allclose(restored.boxes, window.boxes, rtol=0, atol=1e-12)
    np.testing.assert_allclose(restored.poses, window.poses, rtol=0, atol=1e-12)
    np.testing.assert_allclose(restored.imu, window.imu, rtol=0, atol=1e-12)
    assert normalize(normalized, stats) is normalized


def test_constant_imu_channel():
    imu = np.random.default_rng(1).normal(size=(50, 6))
    imu[:, 2] = 8.
    stats = NormStats.fit(imu)

    window = random_window(np.random.default_rng(2))
    window = window.with_arrays(imu=imu[:20].copy())

    assert stats.imu_std[2] == 1.
    assert np.all(normalize(window, stats).imu[:, 2] == 0.)


def test_fit_windows_counts_shared_frames_once():
    rng = np.random.default_rng(3)
    window = random_window(rng)
    shifted = window.slice(5, 20)

    stats = NormStats.fit_windows([window, shifted])

    np.testing.assert_allclose(stats.imu_mean, window.imu.mean(axis=0))


def test_denormalize_clamps_on_request():
    stats = NormStats()

    assert np.array_equal(stats.denormalize_boxes([-0.1, 0.5, 1.2, 1.], clamp=True), [0., 128., 455., 256.])
    assert stats.denormalize_boxes([-0.1, 0., 0., 0.])[0] < 0.


def test_stats_serialization():
    stats = NormStats(imu_mean=np.arange(6.), imu_std=np.full(6, 3.))

    restored = NormStats.from_dict(stats.to_dict())

    assert np.array_equal(restored.imu_mean, stats.imu_mean)
    assert np.array_equal(restored.imu_std, stats.imu_std)
    assert restored.width == 455.
