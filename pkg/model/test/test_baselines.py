import numpy as np
import pytest

from configs.constants import ACROSS, AWAY, STILL, TOWARD
from data_manager.test.factory import linear_boxes, make_window, random_window
from exceptions import UnsupportedDirectionError
from model.baselines.linear_regression import lr_fit, lr_fit_predict
from model.baselines.stats import displacement_matrix, stats_fit, stats_predict, stats_rollout

t_obsv = 10
t_pred = 10


def _replay_displacements(boxes):
    rows = []
    for t in range(t_obsv, t_obsv + t_pred):
        total = np.zeros(4)
        for s in range(t):
            total = total + boxes[s]
        rows.append(boxes[t] - total / t)
    return np.array(rows)


def _replay_predictions(matrix, observed):
    history = [b for b in observed]
    for k in range(t_pred):
        total = np.zeros(4)
        for box in history:
            total = total + box
        history.append(total / len(history) + matrix[k])
    return np.array(history[t_obsv:])


def test_stats_single_sample():
    window = random_window(np.random.default_rng(0), direction=AWAY)
    model = stats_fit([window])

    assert model.directions == [AWAY]
    assert model.counts == {AWAY: 1}
    assert np.array_equal(model.matrices[AWAY], displacement_matrix(window.boxes))
    assert np.array_equal(model.matrices[AWAY], _replay_displacements(window.boxes))


def test_stats_mean_of_two_samples():
    rng = np.random.default_rng(1)
    first, second = random_window(rng, direction=TOWARD), random_window(rng, direction=TOWARD)

    model = stats_fit([first, second])

    expected = (_replay_displacements(first.boxes) + _replay_displacements(second.boxes)) / 2.
    np.testing.assert_allclose(model.matrices[TOWARD], expected, atol=1e-12)


def test_stats_constant_boxes():
    window = make_window(np.tile([50., 40., 90., 140.], (20, 1)), direction=STILL)
    model = stats_fit([window])

    assert not model.matrices[STILL].any()
    prediction = stats_predict(model, window)
    assert np.array_equal(prediction.boxes, np.tile([50., 40., 90., 140.], (9, 1)))
    assert prediction.offsets == tuple(range(2, 11))


def test_stats_reproduces_its_training_sample():
    window = random_window(np.random.default_rng(2), direction=ACROSS)
    model = stats_fit([window, window, window])

    predictions = stats_rollout(model, window.boxes, ACROSS)

    np.testing.assert_allclose(predictions, window.boxes[t_obsv:], atol=1e-9)


def test_stats_matches_sequential_replay_bitwise():
    rng = np.random.default_rng(3)
    windows = [random_window(rng, direction=AWAY) for _ in range(5)]
    model = stats_fit(windows)

    total = np.zeros((t_pred, 4))
    for window in windows:
        total = total + _replay_displacements(window.boxes)
    assert np.array_equal(model.matrices[AWAY], total / 5)

    target = random_window(rng, direction=AWAY)
    assert np.array_equal(stats_rollout(model, target.boxes[:t_obsv], AWAY),
                          _replay_predictions(model.matrices[AWAY], target.boxes[:t_obsv]))


def test_stats_ignores_pose_and_imu():
    rng = np.random.default_rng(4)
    window = random_window(rng, direction=AWAY)
    model = stats_fit([window])
    scrambled = window.with_arrays(poses=window.poses * 3., imu=rng.normal(size=window.imu.shape))

    assert np.array_equal(stats_predict(model, window).boxes, stats_predict(model, scrambled).boxes)


def test_stats_unknown_direction():
    model = stats_fit([random_window(np.random.default_rng(5), direction=AWAY)])

    with pytest.raises(UnsupportedDirectionError):
        stats_predict(model, random_window(np.random.default_rng(6), direction=STILL))


def _least_squares(x, y):
    mx, my = x.mean(), y.mean()
    slope = np.sum((x - mx) * (y - my)) / np.sum((x - mx) ** 2)
    return slope, my - slope * mx


def _lr_oracle(observed):
    boxes = []
    for k in range(1, t_pred + 1):
        box = []
        for xc, yc in ((0, 1), (2, 3)):
            x, y = observed[:, xc], observed[:, yc]
            slope, intercept = _least_squares(x, y)
            x_next = x[-1] + k * (x[-1] - x[0]) / (t_obsv - 1)
            box += [x_next, slope * x_next + intercept]
        boxes.append(box)
    return np.array(boxes)


def test_lr_continues_a_diagonal():
    boxes = linear_boxes(20)
    prediction = lr_fit_predict(make_window(boxes))

    assert prediction.offsets == tuple(range(2, 11))
    np.testing.assert_allclose(prediction.boxes, boxes[11:], atol=1e-9)


def test_lr_stationary_box():
    boxes = np.tile([200., 80., 240., 180.], (20, 1))
    regression = lr_fit(boxes[:t_obsv])

    assert regression.top_left.degenerate and regression.bottom_right.degenerate
    assert regression.top_left.alpha == 0.
    np.testing.assert_allclose(lr_fit_predict(make_window(boxes)).boxes, boxes[11:], atol=1e-9)


def test_lr_vertical_motion_falls_back_to_time():
    boxes = linear_boxes(20, velocity=(0., 3., 0., 3.))
    prediction = lr_fit_predict(make_window(boxes))

    np.testing.assert_allclose(prediction.boxes, boxes[11:], atol=1e-9)


def _noisy_corner_track(rng, steps=20):
    top_left = rng.uniform(50., 250., 2) + np.arange(steps)[:, None] * rng.uniform(-3., 3., 2)
    size = rng.uniform([40., 80.], [80., 140.]) + np.arange(steps)[:, None] * rng.uniform(-0.5, 0.5, 2)
    boxes = np.concatenate([top_left, top_left + size], axis=1)
    return boxes + rng.normal(scale=2., size=boxes.shape)


def test_lr_matches_closed_form_least_squares():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        boxes = _noisy_corner_track(rng)

        prediction = lr_fit_predict(make_window(boxes, rng=rng))

        np.testing.assert_allclose(prediction.boxes, _lr_oracle(boxes[:t_obsv])[1:], atol=1e-9, rtol=0)


def test_lr_translation_equivariance():
    rng = np.random.default_rng(8)
    boxes = linear_boxes(20) + rng.normal(size=(20, 4))
    shifted = boxes + np.array([12., -7., 12., -7.])

    np.testing.assert_allclose(lr_fit_predict(make_window(shifted)).boxes,
                               lr_fit_predict(make_window(boxes)).boxes + np.array([12., -7., 12., -7.]),
                               atol=1e-8)
    assert np.array_equal(lr_fit_predict(make_window(boxes)).boxes, lr_fit_predict(make_window(boxes)).boxes)
