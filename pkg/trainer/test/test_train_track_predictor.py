import json
from pathlib import Path

import numpy as np
import pytest

from agents.commands import cmd_gradcheck, cmd_synth, cmd_train
from configs.constants import BEST_CHECKPOINT_FILENAME, FINAL_CHECKPOINT_FILENAME, L_LSTM_METHOD, LOCATION, \
    LOSS_LOG_FILENAME, RUN_CONFIG_FILENAME
from data_manager.builder import TrackDatasetBuilder
from data_manager.schema import future_truth
from data_manager.synth import load_scene_spec
from data_manager.test.factory import write_synth_dataset
from exceptions import ConfigurationError
from model.checkpoint import load_checkpoint
from model.seq2seq.lip_lstm import predict
from trainer.utils import create_trainer
from utils import load_json, resolve_configs


def _configs(data_path, deploy_path, **train):
    train_configs = {'epochs': 2, 'batch_size': 8, 'learning_rate': 1e-3}
    train_configs.update(train)
    return resolve_configs(None, {'random_seed': 11,
                                  'dataset': {'path': str(data_path)},
                                  'model': {'hidden': 8},
                                  'train': train_configs,
                                  'deploy': {'path': str(deploy_path)}})


def test_model_train_with_synthetic_data(tmp_path):
    write_synth_dataset(tmp_path / 'data')
    configs = _configs(tmp_path / 'data', tmp_path / 'model', valid_fraction=0.5)

    trainer = cmd_train(configs, show_progress=False)

    deploy = tmp_path / 'model'
    assert (deploy / FINAL_CHECKPOINT_FILENAME).exists()
    assert (deploy / BEST_CHECKPOINT_FILENAME).exists()
    assert load_json(deploy / RUN_CONFIG_FILENAME)['model']['hidden'] == 8

    records = [json.loads(line) for line in (deploy / LOSS_LOG_FILENAME).read_text().splitlines()]
    assert [r['epoch'] for r in records] == [1, 2]
    assert all(np.isfinite(r['train_loss']) for r in records)
    assert trainer.history == records
    assert trainer.best_epoch in (1, 2)

    checkpoint = load_checkpoint(deploy / FINAL_CHECKPOINT_FILENAME)
    assert checkpoint.cfg.hidden == 8
    assert checkpoint.store.step > 0


def test_training_is_reproducible(tmp_path):
    write_synth_dataset(tmp_path / 'data')

    cmd_train(_configs(tmp_path / 'data', tmp_path / 'first'), show_progress=False)
    cmd_train(_configs(tmp_path / 'data', tmp_path / 'second'), show_progress=False)

    assert (tmp_path / 'first' / FINAL_CHECKPOINT_FILENAME).read_bytes() == \
        (tmp_path / 'second' / FINAL_CHECKPOINT_FILENAME).read_bytes()


def test_location_only_trainer(tmp_path):
    write_synth_dataset(tmp_path / 'data')
    builder = TrackDatasetBuilder(tmp_path / 'data', random_seed=0)
    configs = _configs(tmp_path / 'data', tmp_path / 'l_lstm', epochs=1)

    trainer = create_trainer(L_LSTM_METHOD, builder, configs['model'], configs['train'], 0,
                             deploy_path=tmp_path / 'l_lstm', show_progress=False, enable_tensorboard=False)
    trainer.train()

    checkpoint = load_checkpoint(tmp_path / 'l_lstm' / FINAL_CHECKPOINT_FILENAME)
    assert checkpoint.method == L_LSTM_METHOD
    assert checkpoint.cfg.feature_mask == (LOCATION,)
    assert checkpoint.store['encoder.l0.w_ih'].shape == (32, 4)


def test_untrainable_type(tmp_path):
    write_synth_dataset(tmp_path / 'data')
    builder = TrackDatasetBuilder(tmp_path / 'data')
    configs = _configs(tmp_path / 'data', tmp_path / 'model')

    with pytest.raises(ConfigurationError):
        create_trainer('stats', builder, configs['model'], configs['train'], 0)


def test_gradcheck_command():
    errors, passed = cmd_gradcheck(0, show_progress=False)

    assert passed
    assert max(errors.values()) < 1e-5
    assert 'head.w' in errors


def test_gradcheck_command_detects_a_corrupted_gradient():
    errors, passed = cmd_gradcheck(0, corrupt_param='decoder.l1.w_hh', show_progress=False)

    assert not passed
    assert errors['decoder.l1.w_hh'] > 1e-5
    assert errors['head.b'] < 1e-5

    with pytest.raises(ConfigurationError):
        cmd_gradcheck(0, corrupt_param='missing', show_progress=False)


@pytest.mark.slow
def test_still_scene_converges_to_the_constant_box(tmp_path):
    write_synth_dataset(tmp_path / 'data', counts={'still': 10}, seed=1, track_length=(20, 40),
                        forward_speed=(0., 0.), yaw_rate=(0., 0.), yaw_bias=(0., 0.), box_noise=0.,
                        pose_noise=0., accel_noise=0., gyro_noise=0.01, test_fraction=0.2)
    configs = _configs(tmp_path / 'data', tmp_path / 'still', epochs=300, batch_size=16, learning_rate=5e-3,
                       teacher_force_rate=0.5)
    configs['model'].update({'hidden': 32, 'dropout': 0.})

    cmd_train(configs, show_progress=False)

    checkpoint = load_checkpoint(tmp_path / 'still' / FINAL_CHECKPOINT_FILENAME)
    builder = TrackDatasetBuilder(tmp_path / 'data')
    for window in builder.test_windows:
        prediction = predict(checkpoint.store, checkpoint.cfg, window, checkpoint.stats)
        truth = future_truth(window, checkpoint.cfg.t_obsv, checkpoint.cfg.offsets)
        assert np.max(np.abs(prediction.boxes - truth.boxes)) < 5.


@pytest.mark.slow
def test_overfit_preset_memorizes_sixteen_windows(tmp_path):
    scripts = Path(__file__).parents[2] / 'scripts'
    cmd_synth(load_scene_spec(scripts / 'synth' / 'default_scene.json'), tmp_path / 'data', show_progress=False)
    configs = resolve_configs(scripts / 'train' / 'overfit_configs.json',
                              {'dataset': {'path': str(tmp_path / 'data')},
                               'deploy': {'path': str(tmp_path / 'model')}})

    trainer = cmd_train(configs, show_progress=False)

    assert len(trainer.history) == 2000
    assert trainer.history[-1]['train_loss'] < 1e-4


def test_per_direction_presets():
    presets = Path(__file__).parents[2] / 'scripts' / 'train'
    defaults = resolve_configs(presets / 'lip_lstm_configs.json')
    toward = resolve_configs(presets / 'per_direction_configs.json')
    away = resolve_configs(presets / 'per_direction_away_configs.json')

    assert toward['dataset']['direction'] == 'toward'
    assert (toward['train']['batch_size'], toward['train']['epochs']) == (32, 1000)
    assert away['dataset']['direction'] == 'away'
    assert (away['train']['batch_size'], away['train']['epochs']) == \
        (defaults['train']['batch_size'], defaults['train']['epochs'])
