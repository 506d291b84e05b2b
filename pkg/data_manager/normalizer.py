import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable

import numpy as np

from configs.constants import FRAME_HEIGHT, FRAME_WIDTH, NUM_IMU_CHANNELS
from data_manager.schema import TrackWindow

logger = logging.getLogger(__name__)


@dataclass
class NormStats:
    width: float = float(FRAME_WIDTH)
    height: float = float(FRAME_HEIGHT)
    imu_mean: np.ndarray = field(default_factory=lambda: np.zeros(NUM_IMU_CHANNELS))
    imu_std: np.ndarray = field(default_factory=lambda: np.ones(NUM_IMU_CHANNELS))

    def __post_init__(self):
        self.imu_mean = np.asarray(self.imu_mean, dtype=np.float64)
        self.imu_std = np.asarray(self.imu_std, dtype=np.float64)
        if not (np.all(np.isfinite(self.imu_mean)) and np.all(np.isfinite(self.imu_std))):
            raise ValueError('normalization statistics must be finite')
        # zero-variance channels z-score to 0
        self.imu_std = np.where(self.imu_std > 0., self.imu_std, 1.)

    @classmethod
    def fit(cls, imu_frames: np.ndarray, width: float = FRAME_WIDTH, height: float = FRAME_HEIGHT) -> 'NormStats':
        imu_frames = np.asarray(imu_frames, dtype=np.float64).reshape(-1, NUM_IMU_CHANNELS)
        if imu_frames.shape[0] == 0:
            return cls(float(width), float(height))

        stats = cls(float(width), float(height), imu_frames.mean(axis=0), imu_frames.std(axis=0))
        logger.info('imu mean: {}'.format(np.round(stats.imu_mean, 4).tolist()))
        logger.info('imu std: {}'.format(np.round(stats.imu_std, 4).tolist()))

        return stats

    @classmethod
    def fit_windows(cls, windows: Iterable[TrackWindow]) -> 'NormStats':
        # each frame counted once even when windows overlap
        frames = {}
        for window in windows:
            for step, frame_index in enumerate(window.frame_indices):
                frames[(window.clip_id, window.person_id, int(frame_index))] = window.imu[step]
        imu = np.array([frames[k] for k in sorted(frames)]) if frames else np.zeros((0, NUM_IMU_CHANNELS))

        return cls.fit(imu)

    @property
    def scale(self) -> np.ndarray:
        return np.array([self.width, self.height, self.width, self.height])

    def normalize_boxes(self, boxes: np.ndarray) -> np.ndarray:
        return np.asarray(boxes, dtype=np.float64) / self.scale

    def denormalize_boxes(self, boxes: np.ndarray, clamp: bool = False) -> np.ndarray:
        boxes = np.asarray(boxes, dtype=np.float64)
        if clamp:
            boxes = np.clip(boxes, 0., 1.)
        return boxes * self.scale

    def to_dict(self) -> Dict:
        return {'width': self.width, 'height': self.height,
                'imu_mean': self.imu_mean.tolist(), 'imu_std': self.imu_std.tolist()}

    @classmethod
    def from_dict(cls, obj: Dict) -> 'NormStats':
        return cls(obj['width'], obj['height'], obj['imu_mean'], obj['imu_std'])


def normalize(window: TrackWindow, stats: NormStats) -> TrackWindow:
    if window.normalized:
        return window

    poses = window.poses.copy()
    poses[..., 0] /= stats.width
    poses[..., 1] /= stats.height

    return window.with_arrays(boxes=stats.normalize_boxes(window.boxes),
                              poses=poses,
                              imu=(window.imu - stats.imu_mean) / stats.imu_std,
                              normalized=True)


def denormalize(window: TrackWindow, stats: NormStats) -> TrackWindow:
    if not window.normalized:
        return window

    poses = window.poses.copy()
    poses[..., 0] *= stats.width
    poses[..., 1] *= stats.height

    return window.with_arrays(boxes=stats.denormalize_boxes(window.boxes),
                              poses=poses,
                              imu=window.imu * stats.imu_std + stats.imu_mean,
                              normalized=False)
