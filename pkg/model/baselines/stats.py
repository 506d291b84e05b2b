"""Statistics-based baseline: per-direction average displacement matrices.

For every future step the displacement of the true box from the running mean
of all earlier boxes of the window is recorded; one matrix per training
sample, averaged per walking direction. Prediction replays the displacements
on top of a running mean that absorbs its own predictions.

Sums are accumulated row by row in window order so results are reproducible
bit for bit by a plain sequential replay.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable

import numpy as np

from configs.constants import BOX_SIZE, DIRECTIONS, T_OBSV, T_PRED
from data_manager.schema import PredictionSet, TrackWindow
from exceptions import ContractError, UnsupportedDirectionError

logger = logging.getLogger(__name__)


@dataclass
class DisplacementModel:
    # direction -> (t_pred, 4), rows are offsets +1 ... +t_pred
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    t_obsv: int = T_OBSV
    t_pred: int = T_PRED

    @property
    def directions(self):
        return [d for d in DIRECTIONS if d in self.matrices]

    def require(self, directions: Iterable[str]) -> None:
        missing = set(directions) - set(self.matrices)
        if missing:
            raise UnsupportedDirectionError(missing)


def displacement_matrix(boxes: np.ndarray, t_obsv: int = T_OBSV, t_pred: int = T_PRED) -> np.ndarray:
    """Rows l_t - mean(l_first ... l_{t-1}) for t = t0+1 ... t0+t_pred, all true boxes."""
    if boxes.shape[0] < t_obsv + t_pred:
        raise ContractError('window has {} boxes, need {}'.format(boxes.shape[0], t_obsv + t_pred))

    total = np.zeros(BOX_SIZE)
    for step in range(t_obsv):
        total = total + boxes[step]

    rows = np.empty((t_pred, BOX_SIZE))
    for k in range(t_pred):
        step = t_obsv + k
        rows[k] = boxes[step] - total / step
        total = total + boxes[step]

    return rows


def stats_fit(train: Iterable[TrackWindow], t_obsv: int = T_OBSV, t_pred: int = T_PRED) -> DisplacementModel:
    sums, counts = {}, {}
    for window in train:
        rows = displacement_matrix(window.boxes, t_obsv, t_pred)
        sums[window.direction] = sums.get(window.direction, np.zeros((t_pred, BOX_SIZE))) + rows
        counts[window.direction] = counts.get(window.direction, 0) + 1

    model = DisplacementModel(t_obsv=t_obsv, t_pred=t_pred)
    for direction in DIRECTIONS:
        if direction not in counts:
            continue
        model.matrices[direction] = sums[direction] / counts[direction]
        model.counts[direction] = counts[direction]
        logger.info('displacement matrix for {}: {} samples'.format(direction, counts[direction]))

    return model


def stats_rollout(model: DisplacementModel, observed: np.ndarray, direction: str) -> np.ndarray:
    """All t_pred predicted boxes, offsets +1 ... +t_pred."""
    model.require([direction])
    observed = np.asarray(observed, dtype=np.float64)[:model.t_obsv, :BOX_SIZE]
    if observed.shape[0] != model.t_obsv:
        raise ContractError('STATS needs {} observed boxes, got {}'.format(model.t_obsv, observed.shape[0]))

    displacement = model.matrices[direction]
    total = np.zeros(BOX_SIZE)
    for step in range(model.t_obsv):
        total = total + observed[step]

    predictions = np.empty((model.t_pred, BOX_SIZE))
    for k in range(model.t_pred):
        predictions[k] = total / (model.t_obsv + k) + displacement[k]
        total = total + predictions[k]

    return predictions


def stats_predict(model: DisplacementModel, window: TrackWindow, direction: str = None) -> PredictionSet:
    """Offsets +2 ... +t_pred; the direction label is an oracle input and defaults to the window's."""
    direction = window.direction if direction is None else direction
    predictions = stats_rollout(model, window.boxes, direction)

    return PredictionSet(predictions[1:], tuple(range(2, model.t_pred + 1)))
