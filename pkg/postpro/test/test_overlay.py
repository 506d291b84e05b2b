import numpy as np
from PIL import Image

from configs.constants import FRAME_HEIGHT, FRAME_WIDTH, GROUND_TRUTH_METHOD, LR_METHOD
from data_manager.schema import PredictionSet
from data_manager.test.factory import linear_boxes, make_window
from postpro.overlay import GAP, METHOD_COLORS, clamp_box, overlay_pixels, render_overlay, save_overlay


def _window():
    return make_window(linear_boxes(start=(100., 60., 140., 160.), velocity=(3., 0., 3., 0.)))


def test_render_overlay_panels():
    window = _window()
    prediction = PredictionSet(window.boxes[11:] + 20., range(2, 11))

    image = render_overlay(window, {LR_METHOD: prediction})

    assert image.size == (2 * FRAME_WIDTH + GAP, FRAME_HEIGHT)
    pixels = overlay_pixels(image)
    for color in (METHOD_COLORS[GROUND_TRUTH_METHOD], METHOD_COLORS[LR_METHOD]):
        left = pixels[:, :FRAME_WIDTH]
        right = pixels[:, FRAME_WIDTH + GAP:]
        assert np.any(np.all(left == color, axis=-1))
        assert np.any(np.all(right == color, axis=-1))


def test_overlay_is_deterministic(tmp_path):
    window = _window()
    prediction = PredictionSet(window.boxes[11:], range(2, 11))

    first = save_overlay(render_overlay(window, {LR_METHOD: prediction}), tmp_path / 'a' / 'one.png')
    second = save_overlay(render_overlay(window, {LR_METHOD: prediction}), tmp_path / 'two.png')

    assert first.read_bytes() == second.read_bytes()
    assert Image.open(first).size == (2 * FRAME_WIDTH + GAP, FRAME_HEIGHT)


def test_clamp_box_orders_and_clips():
    assert clamp_box([500., 300., -10., 20.]) == (0., 20., 455., 256.)


def test_missing_offset_is_skipped():
    window = _window()
    short = PredictionSet(window.boxes[11:14], range(2, 5))

    image = render_overlay(window, {LR_METHOD: short}, offsets=(10,))

    pixels = overlay_pixels(image)
    assert image.size == (FRAME_WIDTH, FRAME_HEIGHT)
    assert not np.any(np.all(pixels == METHOD_COLORS[LR_METHOD], axis=-1))
