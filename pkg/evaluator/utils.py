import logging
from typing import Dict, Sequence

from agents.predictor import CheckpointPredictor, GroundTruthPredictor, LinearRegressionPredictor, StatsPredictor
from configs.constants import GROUND_TRUTH_METHOD, LAST_OBSERVED, LIP_LSTM_METHOD, LR_METHOD, L_LSTM_METHOD, \
    STATS_METHOD
from data_manager.builder import TrackDatasetBuilder
from evaluator.eval_predictor import TrackPredictorEvaluator
from exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def create_predictors(methods: Sequence[str], data_builder: TrackDatasetBuilder, t_obsv: int, t_pred: int,
                      checkpoints: Dict[str, str] = None, seed_mode: str = LAST_OBSERVED):
    checkpoints = checkpoints or {}
    predictors = []
    for method in methods:
        if method == STATS_METHOD:
            predictors.append(StatsPredictor.fit(data_builder.train_windows, t_obsv, t_pred))
        elif method == LR_METHOD:
            predictors.append(LinearRegressionPredictor(t_obsv, t_pred))
        elif method == GROUND_TRUTH_METHOD:
            predictors.append(GroundTruthPredictor(t_obsv, t_pred))
        elif method in (L_LSTM_METHOD, LIP_LSTM_METHOD):
            if method not in checkpoints:
                raise ConfigurationError('no checkpoint given for {}'.format(method))
            predictor = CheckpointPredictor.from_path(checkpoints[method], seed_mode)
            if (predictor.cfg.t_obsv, predictor.cfg.t_pred) != (t_obsv, t_pred):
                raise ConfigurationError('{} checkpoint was trained with t_obsv={} t_pred={}'.format(
                    method, predictor.cfg.t_obsv, predictor.cfg.t_pred))
            predictor.method = method
            predictors.append(predictor)
        else:
            raise ConfigurationError('unknown method {!r}'.format(method))

    return predictors


def create_evaluator(methods: Sequence[str], data_builder: TrackDatasetBuilder, model_configs: Dict,
                     checkpoints: Dict[str, str] = None, seed_mode: str = LAST_OBSERVED,
                     show_progress: bool = True) -> TrackPredictorEvaluator:
    t_obsv, t_pred = model_configs['t_obsv'], model_configs['t_pred']
    predictors = create_predictors(methods, data_builder, t_obsv, t_pred, checkpoints, seed_mode)

    return TrackPredictorEvaluator(predictors, data_builder.test_windows, t_obsv, t_pred, seed_mode,
                                   show_progress=show_progress)
