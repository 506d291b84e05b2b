"""Overlay plots of predicted and true boxes at chosen future offsets.

Each panel is a blank frame showing the observed center trajectory, the true
box at the panel offset and every method's predicted box there, each with its
center trajectory up to that offset and color-keyed per method. Panels are
placed side by side.
"""
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Sequence, Tuple

import numpy as np
from PIL import Image, ImageDraw

from configs.constants import FRAME_HEIGHT, FRAME_WIDTH, GROUND_TRUTH_METHOD, L_LSTM_METHOD, LIP_LSTM_METHOD, \
    LR_METHOD, METHOD_TITLES, STATS_METHOD, T_OBSV
from data_manager.schema import BoundingBox, PredictionSet, TrackWindow, box_centers
from utils import make_dir_if_not_exist

DEFAULT_PANEL_OFFSETS = (5, 10)
BACKGROUND = (40, 40, 40)
TRAJECTORY_COLOR = (200, 200, 200)
METHOD_COLORS = OrderedDict([(GROUND_TRUTH_METHOD, (60, 220, 60)),
                             (STATS_METHOD, (230, 160, 40)),
                             (LR_METHOD, (80, 160, 255)),
                             (L_LSTM_METHOD, (220, 80, 220)),
                             (LIP_LSTM_METHOD, (255, 60, 60))])
FALLBACK_COLOR = (255, 255, 255)
GAP = 8


def clamp_box(box) -> Tuple[float, float, float, float]:
    x1, x2 = sorted((float(box[0]), float(box[2])))
    y1, y2 = sorted((float(box[1]), float(box[3])))
    return tuple(BoundingBox(x1, y1, x2, y2).clamp(FRAME_WIDTH, FRAME_HEIGHT))


def _panel(window: TrackWindow, predictions: Dict[str, PredictionSet], t_obsv: int, offset: int) -> Image.Image:
    image = Image.new('RGB', (FRAME_WIDTH, FRAME_HEIGHT), BACKGROUND)
    draw = ImageDraw.Draw(image)

    centers = box_centers(window.boxes[:t_obsv])
    draw.line([tuple(c) for c in centers.tolist()], fill=TRAJECTORY_COLOR, width=1)
    for x, y in centers.tolist():
        draw.ellipse((x - 1.5, y - 1.5, x + 1.5, y + 1.5), fill=TRAJECTORY_COLOR)

    t0 = t_obsv - 1
    boxes, tracks = OrderedDict(), OrderedDict()
    if t0 + offset < len(window):
        boxes[GROUND_TRUTH_METHOD] = window.boxes[t0 + offset]
        tracks[GROUND_TRUTH_METHOD] = box_centers(window.boxes[t0:t0 + offset + 1])
    for method, prediction in predictions.items():
        if offset in prediction.offsets:
            boxes[method] = prediction.at(offset)
            shown = [n for n, o in enumerate(prediction.offsets) if o <= offset]
            tracks[method] = np.vstack([centers[-1:], prediction.centers[shown]])

    legend_y = 4
    for method, box in boxes.items():
        color = METHOD_COLORS.get(method, FALLBACK_COLOR)
        points = np.clip(tracks[method], 0., [FRAME_WIDTH, FRAME_HEIGHT])
        draw.line([tuple(p) for p in points.tolist()], fill=color, width=1)
        draw.rectangle(clamp_box(box), outline=color, width=2)
        draw.text((4, legend_y), METHOD_TITLES.get(method, method), fill=color)
        legend_y += 12
    draw.text((FRAME_WIDTH - 40, 4), 't0+{}'.format(offset), fill=TRAJECTORY_COLOR)

    return image


def render_overlay(window: TrackWindow, predictions: Dict[str, PredictionSet], t_obsv: int = T_OBSV,
                   offsets: Sequence[int] = DEFAULT_PANEL_OFFSETS) -> Image.Image:
    panels = [_panel(window, predictions, t_obsv, offset) for offset in offsets]
    width = len(panels) * FRAME_WIDTH + (len(panels) - 1) * GAP
    canvas = Image.new('RGB', (width, FRAME_HEIGHT), (0, 0, 0))
    for n, panel in enumerate(panels):
        canvas.paste(panel, (n * (FRAME_WIDTH + GAP), 0))

    return canvas


def save_overlay(image: Image.Image, path) -> Path:
    path = Path(path)
    make_dir_if_not_exist(path.parent)
    image.save(path, format='PNG', optimize=False)

    return path


def overlay_pixels(image: Image.Image) -> np.ndarray:
    return np.asarray(image, dtype=np.uint8)
