from typing import Dict, List, Sequence, Tuple

import numpy as np

from torch.utils.data import Dataset

from data_manager.normalizer import NormStats, normalize
from data_manager.schema import TrackWindow
from model.seq2seq.lip_lstm import WindowBatch


class TrackWindowDataset(Dataset):
    """Normalized track windows; items keep float64 numpy arrays for the numpy model."""
    def __init__(self,
                 windows: Sequence[TrackWindow],
                 stats: NormStats) -> None:
        self._raw = list(windows)
        self._windows = [normalize(w, stats) for w in self._raw]
        self.stats = stats

        return

    def __len__(self) -> int:
        return len(self._windows)

    def __getitem__(self, idx: int) -> Dict:
        window = self._windows[idx]

        return {'index': idx,
                'boxes': window.boxes,
                'poses': window.poses,
                'imu': window.imu}

    @property
    def windows(self) -> List[TrackWindow]:
        return self._windows

    @property
    def raw_windows(self) -> List[TrackWindow]:
        return self._raw


def collate_windows(samples: Sequence[Dict]) -> Tuple[WindowBatch, np.ndarray]:
    batch = WindowBatch(np.stack([s['boxes'] for s in samples]),
                        np.stack([s['poses'] for s in samples]),
                        np.stack([s['imu'] for s in samples]))

    return batch, np.array([s['index'] for s in samples], dtype=np.int64)
