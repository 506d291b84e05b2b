import logging
from collections import OrderedDict
from pathlib import Path
from typing import Iterable, List

import torch
from sklearn.model_selection import train_test_split
from torch.utils.data import DataLoader

from configs.constants import DIRECTIONS, RANDOM_SEED, T_OBSV, T_PRED
from data_manager.clip_io import load_clips, test_clip_ids
from data_manager.dataset import TrackWindowDataset, collate_windows
from data_manager.normalizer import NormStats
from data_manager.schema import Clip, TrackWindow
from data_manager.windows import sample_count_table, split_by_video, windows_of
from exceptions import ConfigurationError, UnsupportedDirectionError

logger = logging.getLogger(__name__)


class TrackDatasetBuilder(object):
    """Loads clips, splits them by video and serves normalized windows in seeded batches."""
    def __init__(self,
                 data_path: Path,
                 stride: int = 1,
                 t_obsv: int = T_OBSV,
                 t_pred: int = T_PRED,
                 direction: str = None,
                 test_ids: Iterable[str] = None,
                 valid_fraction: float = 0.,
                 limit_samples: int = None,
                 random_seed: int = RANDOM_SEED) -> None:
        if direction is not None and direction not in DIRECTIONS:
            raise UnsupportedDirectionError([direction])
        if not 0. <= valid_fraction < 1.:
            raise ConfigurationError('valid_fraction must be in [0, 1), got {}'.format(valid_fraction))

        self._data_path = Path(data_path)
        self._stride = stride
        self._length = t_obsv + t_pred
        self._direction = direction
        self._random_seed = random_seed

        logger.info('load clips: {}'.format(self._data_path))
        self._clips = load_clips(self._data_path)
        test_ids = test_clip_ids(self._data_path) if test_ids is None else list(test_ids)
        train_clips, self._test_clips = split_by_video(self._clips, test_ids)
        self._train_clips, self._valid_clips = self._split_into_valid_and_train(train_clips, valid_fraction)

        self._train_windows = self._windows(self._train_clips)
        if limit_samples is not None:
            self._train_windows = self._train_windows[:limit_samples]
        self._valid_windows = self._windows(self._valid_clips)
        self._test_windows = self._windows(self._test_clips)

        self._stats = None

        logger.info('windows: {} train / {} valid / {} test'.format(len(self._train_windows),
                                                                    len(self._valid_windows),
                                                                    len(self._test_windows)))

    @property
    def clips(self) -> List[Clip]:
        return self._clips

    @property
    def train_clips(self) -> List[Clip]:
        return self._train_clips

    @property
    def test_clips(self) -> List[Clip]:
        return self._test_clips

    @property
    def train_windows(self) -> List[TrackWindow]:
        return self._train_windows

    @property
    def valid_windows(self) -> List[TrackWindow]:
        return self._valid_windows

    @property
    def test_windows(self) -> List[TrackWindow]:
        return self._test_windows

    @property
    def stats(self) -> NormStats:
        if self._stats is None:
            self._stats = self.build_norm_stats()
        return self._stats

    def _windows(self, clips: List[Clip]) -> List[TrackWindow]:
        return windows_of(clips, self._stride, self._length, self._direction)

    def _split_into_valid_and_train(self, clips: List[Clip], valid_fraction: float):
        if valid_fraction <= 0.:
            return clips, []
        if len(clips) < 2:
            logger.warning('not enough training clips for a validation split')
            return clips, []

        clip_ids = [clip.clip_id for clip in clips]
        _, valid_ids = train_test_split(clip_ids, test_size=valid_fraction, random_state=self._random_seed)
        valid_ids = set(valid_ids)
        logger.info('hold out {} of {} training clips for validation'.format(len(valid_ids), len(clips)))

        return [c for c in clips if c.clip_id not in valid_ids], [c for c in clips if c.clip_id in valid_ids]

    def build_norm_stats(self) -> NormStats:
        logger.info('fit normalization statistics on {} training windows'.format(len(self._train_windows)))
        return NormStats.fit_windows(self._train_windows)

    def build_data_loader(self, batch_size: int, stats: NormStats = None, shuffle: bool = True,
                          random_seed: int = None) -> DataLoader:
        if not self._train_windows:
            raise ConfigurationError('training split of {} has no windows'.format(self._data_path))

        return self._loader(self._train_windows, batch_size, stats, shuffle, random_seed)

    def build_valid_data_loader(self, batch_size: int, stats: NormStats = None) -> DataLoader:
        if not self._valid_windows:
            return None

        return self._loader(self._valid_windows, batch_size, stats, shuffle=False)

    def _loader(self, windows, batch_size, stats=None, shuffle=False, random_seed=None) -> DataLoader:
        generator = torch.Generator()
        generator.manual_seed(self._random_seed if random_seed is None else random_seed)
        dataset = TrackWindowDataset(windows, self.stats if stats is None else stats)

        return DataLoader(dataset, batch_size=batch_size, shuffle=shuffle, collate_fn=collate_windows,
                          generator=generator, num_workers=0)

    def sample_counts(self) -> str:
        splits = OrderedDict([('Train', self._train_windows)])
        if self._valid_windows:
            splits['Valid'] = self._valid_windows
        splits['Test'] = self._test_windows

        return sample_count_table(splits).get_string()
