from pathlib import Path

from configs.constants import RANDOM_SEED
from data_manager.builder import TrackDatasetBuilder
from exceptions import ConfigurationError


def create_builder(configs: dict) -> TrackDatasetBuilder:
    dataset_configs = configs['dataset']
    model_configs = configs['model']
    if not dataset_configs.get('path'):
        raise ConfigurationError('dataset.path is not set')

    return TrackDatasetBuilder(Path(dataset_configs['path']),
                               stride=dataset_configs.get('stride', 1),
                               t_obsv=model_configs['t_obsv'],
                               t_pred=model_configs['t_pred'],
                               direction=dataset_configs.get('direction'),
                               test_ids=dataset_configs.get('test_clip_ids'),
                               valid_fraction=configs.get('train', {}).get('valid_fraction', 0.),
                               limit_samples=dataset_configs.get('limit_samples'),
                               random_seed=configs.get('random_seed', RANDOM_SEED))
