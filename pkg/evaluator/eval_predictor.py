import json
import logging
from collections import OrderedDict
from typing import Dict, List, Sequence

from tqdm import tqdm

from agents.predictor import Predictor
from configs.constants import LAST_OBSERVED, STATS_METHOD, T_OBSV, T_PRED
from data_manager.schema import PredictionSet, TrackWindow, future_truth
from evaluator.report import EvalReport, eval_report, render_report, report_records
from exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class TrackPredictorEvaluator(object):
    """Runs every predictor over the same test windows and scores them against the true future boxes."""
    def __init__(self,
                 predictors: Sequence[Predictor],
                 windows: Sequence[TrackWindow],
                 t_obsv: int = T_OBSV,
                 t_pred: int = T_PRED,
                 seed_mode: str = LAST_OBSERVED,
                 show_progress: bool = True):
        if not windows:
            raise ConfigurationError('test split has no windows')

        self._predictors = list(predictors)
        self._windows = list(windows)
        self._t_obsv = t_obsv
        self._offsets = tuple(range(2, t_pred + 1))
        self._seed_mode = seed_mode
        self._show_progress = show_progress

        self._truths = [future_truth(w, t_obsv, self._offsets) for w in self._windows]
        self.predictions = OrderedDict()
        self.reports = OrderedDict()

    @property
    def windows(self) -> List[TrackWindow]:
        return self._windows

    @property
    def truths(self) -> List[PredictionSet]:
        return self._truths

    def eval(self) -> Dict[str, EvalReport]:
        logger.info('now evaluate {} methods on {} windows'.format(len(self._predictors), len(self._windows)))
        directions = [w.direction for w in self._windows]

        for predictor in tqdm(self._predictors, desc='evaluation', disable=not self._show_progress):
            predictions = predictor.predict_many(self._windows)
            self.predictions[predictor.method] = predictions
            self.reports[predictor.method] = eval_report(predictions, self._truths, directions, self._offsets)
            logger.info('{}: mean IOU {:.3f}, mean final IOU {:.3f}, mean DE {:.2f}'.format(
                predictor.method, *self.reports[predictor.method].values()))

        logger.info('evaluation done!')

        return self.reports

    def summary(self) -> str:
        return render_report(self.reports, seed_mode=self._seed_mode, oracle_direction=STATS_METHOD in self.reports,
                             offsets=self._offsets)

    def records(self) -> List[str]:
        return report_records(self.reports, seed_mode=self._seed_mode)

    def prediction_records(self) -> List[str]:
        records = []
        for method, predictions in self.predictions.items():
            for window, prediction in zip(self._windows, predictions):
                record = OrderedDict([('sample_id', window.sample_id),
                                      ('clip_id', window.clip_id),
                                      ('person_id', int(window.person_id)),
                                      ('start_frame', window.start_frame),
                                      ('direction', window.direction),
                                      ('method', method),
                                      ('seed_mode', self._seed_mode)])
                record.update(prediction.to_record())
                records.append(json.dumps(record))

        return records
