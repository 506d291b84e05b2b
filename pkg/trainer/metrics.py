from typing import Sequence, Tuple

import numpy as np

from configs.constants import T_PRED
from data_manager.schema import BoundingBox, PredictionSet
from exceptions import ContractError

DEFAULT_OFFSETS = tuple(range(2, T_PRED + 1))


def box_iou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Element-wise IOU of two (..., 4) box arrays; zero-area unions give 0."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)

    inter_w = np.clip(np.minimum(a[..., 2], b[..., 2]) - np.maximum(a[..., 0], b[..., 0]), 0., None)
    inter_h = np.clip(np.minimum(a[..., 3], b[..., 3]) - np.maximum(a[..., 1], b[..., 1]), 0., None)
    intersection = inter_w * inter_h

    area_a = np.clip(a[..., 2] - a[..., 0], 0., None) * np.clip(a[..., 3] - a[..., 1], 0., None)
    area_b = np.clip(b[..., 2] - b[..., 0], 0., None) * np.clip(b[..., 3] - b[..., 1], 0., None)
    union = area_a + area_b - intersection

    return np.divide(intersection, union, out=np.zeros_like(intersection), where=union > 0.)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    return float(box_iou(np.array(a), np.array(b)))


def center_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.hypot(a[..., 0] - b[..., 0], a[..., 1] - b[..., 1])


def stack_aligned(preds: Sequence[PredictionSet], truths: Sequence[PredictionSet],
                  offsets: Tuple[int, ...] = DEFAULT_OFFSETS) -> Tuple[np.ndarray, np.ndarray]:
    """(N, len(offsets), 4) arrays for predictions and truths, after checking alignment."""
    if len(preds) != len(truths):
        raise ContractError('{} predictions for {} ground-truth samples'.format(len(preds), len(truths)))

    offsets = tuple(offsets)
    for n, (pred, truth) in enumerate(zip(preds, truths)):
        if pred.offsets != offsets:
            raise ContractError('sample {}: prediction offsets {} differ from {}'.format(n, pred.offsets, offsets))
        if truth.offsets != offsets:
            raise ContractError('sample {}: truth offsets {} differ from {}'.format(n, truth.offsets, offsets))

    if not preds:
        empty = np.zeros((0, len(offsets), 4))
        return empty, empty

    return np.stack([p.boxes for p in preds]), np.stack([t.boxes for t in truths])


def mean_iou(preds: Sequence[PredictionSet], truths: Sequence[PredictionSet],
             offsets: Tuple[int, ...] = DEFAULT_OFFSETS) -> float:
    pred_boxes, true_boxes = stack_aligned(preds, truths, offsets)
    return _mean(box_iou(pred_boxes, true_boxes))


def mean_final_iou(preds: Sequence[PredictionSet], truths: Sequence[PredictionSet],
                   offsets: Tuple[int, ...] = DEFAULT_OFFSETS) -> float:
    pred_boxes, true_boxes = stack_aligned(preds, truths, offsets)
    return _mean(box_iou(pred_boxes[:, -1], true_boxes[:, -1]))


def mean_de(preds: Sequence[PredictionSet], truths: Sequence[PredictionSet],
            offsets: Tuple[int, ...] = DEFAULT_OFFSETS) -> float:
    pred_boxes, true_boxes = stack_aligned(preds, truths, offsets)
    pred_centers = np.stack([(pred_boxes[..., 0] + pred_boxes[..., 2]) / 2.,
                             (pred_boxes[..., 1] + pred_boxes[..., 3]) / 2.], axis=-1)
    true_centers = np.stack([(true_boxes[..., 0] + true_boxes[..., 2]) / 2.,
                             (true_boxes[..., 1] + true_boxes[..., 3]) / 2.], axis=-1)

    return _mean(center_distance(pred_centers, true_centers))


def _mean(values: np.ndarray) -> float:
    if values.size == 0:
        return float('nan')
    return float(np.mean(values))
