"""Command implementations behind the ``main.py`` subcommands.

Every command takes an already resolved configuration, writes its outputs
plus a ``run_config.json`` under its output directory and returns what it
produced so it can be driven from tests as well as from the command line.
"""
import json
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
from prettytable import PrettyTable

from configs.constants import BENCHMARK_RECORD_FILENAME, BENCHMARK_TABLE_FILENAME, BOX_SIZE, DIRECTIONS, \
    FINAL_CHECKPOINT_FILENAME, GRADCHECK_THRESHOLD, LAST_OBSERVED, LR_METHOD, NUM_IMU_CHANNELS, NUM_KEYPOINTS, \
    PREDICTIONS_FILENAME, REPORT_RECORD_FILENAME, REPORT_TABLE_FILENAME, SEED_MODES, STATS_METHOD
from data_manager.clip_io import TEST_SPLIT, write_clips
from data_manager.schema import PredictionSet
from data_manager.synth import SceneSpec, assign_splits, synth_generate
from data_manager.utils import create_builder
from data_manager.windows import sample_count_table, windows_of
from evaluator.benchmark import average_mean_de, benchmark_records, benchmark_table, ordering_violations
from evaluator.eval_predictor import TrackPredictorEvaluator
from evaluator.utils import create_evaluator
from exceptions import ConfigurationError
from model.seq2seq.lip_lstm import LipLSTM, ModelConfig, WindowBatch
from postpro.overlay import render_overlay, save_overlay
from trainer.gradcheck import grad_check_groups
from trainer.seq2seq_trainer import TrackPredictorTrainer
from trainer.utils import create_trainer
from utils import archive_configs, make_dir_if_not_exist, merge_configs, save_json, set_logging_config

logger = logging.getLogger(__name__)

GRADCHECK_MODEL = {'hidden': 8, 't_obsv': 5, 't_pred': 4, 'dropout': 0.}
GRADCHECK_BATCH_SIZE = 3
GRADCHECK_TEACHER_FORCE_RATE = 0.5


def cmd_synth(spec: SceneSpec, out_path, seed: int = None, show_progress: bool = True) -> str:
    """Generates clips and a manifest; returns the per-direction sample-count table."""
    out_path = Path(out_path)
    seed = spec.seed if seed is None else seed

    clips = synth_generate(spec, seed, show_progress=show_progress)
    splits = assign_splits(clips, spec.test_fraction, seed)
    write_clips(clips, out_path, splits)
    save_json(dict(spec.to_dict(), seed=seed), out_path / 'scene_spec.json')

    train = [c for c in clips if splits[c.clip_id] != TEST_SPLIT]
    test = [c for c in clips if splits[c.clip_id] == TEST_SPLIT]
    table = sample_count_table(OrderedDict([('Train', windows_of(train)), ('Test', windows_of(test))]))

    clip_counts = OrderedDict((d, sum(1 for c in clips if c.tracks[0].direction == d)) for d in DIRECTIONS)
    logger.info('clips per class: {}'.format(dict(clip_counts)))

    return table.get_string()


def cmd_train(configs: Dict, show_progress: bool = True) -> TrackPredictorTrainer:
    deploy_path = Path(configs['deploy']['path'])
    set_logging_config(deploy_path)
    archive_configs(configs, deploy_path)

    data_builder = create_builder(configs)
    logger.info('samples:\n{}'.format(data_builder.sample_counts()))

    trainer = create_trainer(configs['type'], data_builder, configs['model'], configs['train'],
                             configs['random_seed'], deploy_path=deploy_path, show_progress=show_progress)
    trainer.train()

    return trainer


def _evaluate(configs: Dict, methods: Sequence[str], checkpoints: Dict[str, str], seed_mode: str,
              show_progress: bool) -> TrackPredictorEvaluator:
    if seed_mode not in SEED_MODES:
        raise ConfigurationError('unknown seed mode {!r}'.format(seed_mode))

    data_builder = create_builder(configs)
    evaluator = create_evaluator(methods, data_builder, configs['model'], checkpoints, seed_mode,
                                 show_progress=show_progress)
    evaluator.eval()

    return evaluator


def cmd_eval(configs: Dict, methods: Sequence[str], out_dir, checkpoints: Dict[str, str] = None,
             seed_mode: str = LAST_OBSERVED, show_progress: bool = True) -> TrackPredictorEvaluator:
    out_dir = Path(out_dir)
    make_dir_if_not_exist(out_dir)
    archive_configs(dict(configs, eval={'methods': list(methods), 'checkpoints': checkpoints or {},
                                        'seed_mode': seed_mode}), out_dir)

    evaluator = _evaluate(configs, methods, checkpoints, seed_mode, show_progress)

    summary = evaluator.summary()
    with open(out_dir / REPORT_TABLE_FILENAME, 'w', encoding='utf-8') as report_file:
        report_file.write(summary)
    _write_lines(out_dir / REPORT_RECORD_FILENAME, evaluator.records())
    logger.info('\n' + summary)

    return evaluator


def cmd_predict(configs: Dict, methods: Sequence[str], out_dir, checkpoints: Dict[str, str] = None,
                seed_mode: str = LAST_OBSERVED, show_progress: bool = True) -> Path:
    out_dir = Path(out_dir)
    make_dir_if_not_exist(out_dir)
    archive_configs(dict(configs, eval={'methods': list(methods), 'checkpoints': checkpoints or {},
                                        'seed_mode': seed_mode}), out_dir)

    evaluator = _evaluate(configs, methods, checkpoints, seed_mode, show_progress)
    path = out_dir / PREDICTIONS_FILENAME
    _write_lines(path, evaluator.prediction_records())
    logger.info('wrote predictions for {} windows: {}'.format(len(evaluator.windows), path))

    return path


def cmd_benchmark(spec: SceneSpec, train_configs: Sequence[Dict], seeds: Sequence[int], out_dir,
                  show_progress: bool = True) -> Tuple[str, List[str]]:
    """Synthesizes, trains every model in ``train_configs`` and evaluates all methods once per seed.

    Returns the seed-averaged table and the broken ranking claims (empty when the ranking holds).
    """
    out_dir = Path(out_dir)
    make_dir_if_not_exist(out_dir)
    runs = []
    for seed in seeds:
        seed_dir = out_dir / 'seed_{}'.format(seed)
        data_path = seed_dir / 'data'
        cmd_synth(spec, data_path, seed=seed, show_progress=show_progress)

        checkpoints = OrderedDict()
        for configs in train_configs:
            method = configs['type']
            run_configs = merge_configs(configs, {'random_seed': seed,
                                                  'dataset': {'path': str(data_path)},
                                                  'deploy': {'path': str(seed_dir / method)}})
            cmd_train(run_configs, show_progress=show_progress)
            checkpoints[method] = str(seed_dir / method / FINAL_CHECKPOINT_FILENAME)

        eval_configs = merge_configs(train_configs[0], {'random_seed': seed, 'dataset': {'path': str(data_path)}})
        methods = [STATS_METHOD, LR_METHOD] + list(checkpoints)
        evaluator = cmd_eval(eval_configs, methods, seed_dir / 'eval', checkpoints, show_progress=show_progress)
        runs.append(evaluator.reports)

    table = benchmark_table(seeds, runs).get_string()
    violations = ordering_violations(average_mean_de(runs))
    with open(out_dir / BENCHMARK_TABLE_FILENAME, 'w', encoding='utf-8') as table_file:
        table_file.write(table + '\n')
    _write_lines(out_dir / BENCHMARK_RECORD_FILENAME, benchmark_records(seeds, runs))

    logger.info('benchmark over seeds {}:\n{}'.format(list(seeds), table))
    for violation in violations:
        logger.warning(violation)

    return table, violations


def read_predictions(path) -> 'OrderedDict[str, OrderedDict[str, PredictionSet]]':
    """sample id -> method -> predictions, in file order."""
    grouped = OrderedDict()
    with open(path, encoding='utf-8') as predictions_file:
        for line in predictions_file:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            grouped.setdefault(record['sample_id'], OrderedDict())[record['method']] = \
                PredictionSet.from_record(record)

    return grouped


def cmd_plot(configs: Dict, predictions_path, out_dir, sample_ids: Sequence[str] = None,
             limit: int = None) -> List[Path]:
    out_dir = Path(out_dir)
    make_dir_if_not_exist(out_dir)

    predictions = read_predictions(predictions_path)
    if sample_ids is None:
        sample_ids = list(predictions)
    if limit is not None:
        sample_ids = sample_ids[:limit]
    if not sample_ids:
        return []

    data_builder = create_builder(configs)
    windows = {w.sample_id: w for w in data_builder.test_windows + data_builder.train_windows}
    t_obsv = configs['model']['t_obsv']

    paths = []
    for sample_id in sample_ids:
        if sample_id not in windows or sample_id not in predictions:
            logger.warning('sample {} not found, skipped'.format(sample_id))
            continue
        image = render_overlay(windows[sample_id], predictions[sample_id], t_obsv)
        paths.append(save_overlay(image, out_dir / '{}.png'.format(sample_id.replace(':', '_'))))

    logger.info('wrote {} overlay images to {}'.format(len(paths), out_dir))

    return paths


def gradcheck_batch(cfg: ModelConfig, batch_size: int, rng: np.random.Generator) -> WindowBatch:
    """Random normalized windows of the reduced network's length."""
    steps = cfg.window_length
    corners = rng.uniform(0.1, 0.9, size=(batch_size, steps, 2, 2))
    boxes = np.concatenate([corners.min(axis=2), corners.max(axis=2)], axis=-1).reshape(batch_size, steps,
                                                                                         BOX_SIZE)
    poses = rng.uniform(0., 1., size=(batch_size, steps, cfg.keypoints, 3))
    imu = rng.normal(size=(batch_size, steps, NUM_IMU_CHANNELS))

    return WindowBatch(boxes, poses, imu)


def cmd_gradcheck(seed: int, h: float = 1e-5, threshold: float = GRADCHECK_THRESHOLD, corrupt_param: str = None,
                  show_progress: bool = True) -> Tuple[Dict[str, float], bool]:
    """Checks the reduced network's backward pass; ``corrupt_param`` sign-flips that analytic gradient."""
    cfg = ModelConfig.from_configs(dict(GRADCHECK_MODEL, keypoints=NUM_KEYPOINTS))
    model = LipLSTM(cfg)
    store = model.init_params(seed)
    batch = gradcheck_batch(cfg, GRADCHECK_BATCH_SIZE, np.random.default_rng(seed))

    def forward(params):
        return model.loss(params, batch, tf_prob=GRADCHECK_TEACHER_FORCE_RATE, rng=np.random.default_rng(seed + 1),
                          training=True)

    store.zero_grad()
    model.loss_and_backward(store, batch, tf_prob=GRADCHECK_TEACHER_FORCE_RATE, rng=np.random.default_rng(seed + 1),
                            training=True)
    analytic = store.gradients()
    store.zero_grad()
    if corrupt_param is not None:
        if corrupt_param not in analytic:
            raise ConfigurationError('unknown parameter {!r}'.format(corrupt_param))
        analytic[corrupt_param] = -analytic[corrupt_param]

    errors = grad_check_groups(forward, store, analytic, h, show_progress=show_progress)
    passed = all(e <= threshold for e in errors.values())

    table = PrettyTable(['Parameter', 'Max relative error', 'Pass'])
    for name, error in errors.items():
        table.add_row([name, '{:.3e}'.format(error), 'yes' if error <= threshold else 'NO'])
    logger.info('gradient check (threshold {:.0e}):\n{}'.format(threshold, table.get_string()))

    return errors, passed


def _write_lines(path, lines: Sequence[str]) -> None:
    with open(path, 'w', encoding='utf-8') as out_file:
        for line in lines:
            out_file.write(line + '\n')
