import logging
from pathlib import Path
from typing import List, Sequence

import numpy as np

from configs.constants import GROUND_TRUTH_METHOD, LAST_OBSERVED, LR_METHOD, SEED_MODES, STATS_METHOD, T_OBSV, \
    T_PRED
from data_manager.normalizer import normalize
from data_manager.schema import PredictionSet, TrackWindow, future_truth
from exceptions import ConfigurationError
from model.baselines.linear_regression import lr_fit_predict
from model.baselines.stats import DisplacementModel, stats_fit, stats_predict
from model.checkpoint import Checkpoint, load_checkpoint
from model.seq2seq.lip_lstm import LipLSTM, WindowBatch

logger = logging.getLogger(__name__)


class Predictor(object):
    method = None

    def predict(self, window: TrackWindow) -> PredictionSet:
        raise NotImplementedError()

    def predict_many(self, windows: Sequence[TrackWindow]) -> List[PredictionSet]:
        return [self.predict(w) for w in windows]


class StatsPredictor(Predictor):
    method = STATS_METHOD

    def __init__(self, model: DisplacementModel):
        self.model = model

    @classmethod
    def fit(cls, train_windows: Sequence[TrackWindow], t_obsv: int = T_OBSV, t_pred: int = T_PRED):
        if not train_windows:
            raise ConfigurationError('STATS needs training windows to fit its displacement matrices')
        return cls(stats_fit(train_windows, t_obsv, t_pred))

    def predict(self, window: TrackWindow) -> PredictionSet:
        return stats_predict(self.model, window)

    def predict_many(self, windows: Sequence[TrackWindow]) -> List[PredictionSet]:
        self.model.require({w.direction for w in windows})
        return super().predict_many(windows)


class LinearRegressionPredictor(Predictor):
    method = LR_METHOD

    def __init__(self, t_obsv: int = T_OBSV, t_pred: int = T_PRED):
        self.t_obsv = t_obsv
        self.t_pred = t_pred

    def predict(self, window: TrackWindow) -> PredictionSet:
        return lr_fit_predict(window, self.t_obsv, self.t_pred)


class GroundTruthPredictor(Predictor):
    method = GROUND_TRUTH_METHOD

    def __init__(self, t_obsv: int = T_OBSV, t_pred: int = T_PRED):
        self.t_obsv = t_obsv
        self.offsets = tuple(range(2, t_pred + 1))

    def predict(self, window: TrackWindow) -> PredictionSet:
        return future_truth(window, self.t_obsv, self.offsets)


class CheckpointPredictor(Predictor):
    """A trained encoder-decoder; inference runs in batches of normalized windows."""
    def __init__(self, checkpoint: Checkpoint, seed_mode: str = LAST_OBSERVED, batch_size: int = 256):
        if seed_mode not in SEED_MODES:
            raise ConfigurationError('unknown seed mode {!r}'.format(seed_mode))
        self.checkpoint = checkpoint
        self.method = checkpoint.method
        self.seed_mode = seed_mode
        self.batch_size = batch_size
        self._model = LipLSTM(checkpoint.cfg)

    @classmethod
    def from_path(cls, path, seed_mode: str = LAST_OBSERVED) -> 'CheckpointPredictor':
        logger.info('load checkpoint: {}'.format(path))
        return cls(load_checkpoint(Path(path)), seed_mode)

    @property
    def cfg(self):
        return self.checkpoint.cfg

    def predict(self, window: TrackWindow) -> PredictionSet:
        return self.predict_many([window])[0]

    def predict_many(self, windows: Sequence[TrackWindow]) -> List[PredictionSet]:
        stats = self.checkpoint.stats
        predictions = []
        for start in range(0, len(windows), self.batch_size):
            chunk = [normalize(w, stats) for w in windows[start:start + self.batch_size]]
            outputs = self._model.predict(self.checkpoint.store, WindowBatch.from_windows(chunk), self.seed_mode)
            # (steps, 4, batch) -> per-sample (steps, 4) in pixels
            boxes = stats.denormalize_boxes(np.transpose(outputs, (2, 0, 1)), clamp=True)
            predictions.extend(PredictionSet(b, self.cfg.offsets) for b in boxes)

        return predictions
