import logging
from collections import OrderedDict
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from prettytable import PrettyTable

from configs.constants import DIRECTIONS, WINDOW_LENGTH
from data_manager.schema import Clip, FrameObservation, PersonTrack, TrackWindow
from exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def window_count(track_length: int, stride: int = 1, length: int = WINDOW_LENGTH) -> int:
    return max(0, (track_length - length) // stride + 1)


def usable_runs(track: PersonTrack) -> List[List[FrameObservation]]:
    """Maximal runs of consecutive frame indices whose pose was detected."""
    runs, run = [], []
    for frame in track.frames:
        if not frame.has_pose:
            if run:
                runs.append(run)
            run = []
            continue
        if run and frame.frame_index != run[-1].frame_index + 1:
            runs.append(run)
            run = []
        run.append(frame)
    if run:
        runs.append(run)

    return runs


def window_samples(clip: Clip, stride: int = 1, length: int = WINDOW_LENGTH) -> List[TrackWindow]:
    if stride < 1:
        raise ConfigurationError('stride must be >= 1, got {}'.format(stride))

    windows = []
    for track in clip.tracks:
        for run in usable_runs(track):
            if len(run) < length:
                continue
            boxes = np.array([frame.box for frame in run], dtype=np.float64)
            poses = np.stack([frame.pose for frame in run]).astype(np.float64)
            imu = np.stack([frame.imu for frame in run]).astype(np.float64)
            frame_indices = np.array([frame.frame_index for frame in run], dtype=np.int64)

            for start in range(0, len(run) - length + 1, stride):
                stop = start + length
                windows.append(TrackWindow(boxes=boxes[start:stop].copy(),
                                           poses=poses[start:stop].copy(),
                                           imu=imu[start:stop].copy(),
                                           direction=track.direction,
                                           clip_id=clip.clip_id,
                                           person_id=track.person_id,
                                           frame_indices=frame_indices[start:stop].copy()))

    return windows


def windows_of(clips: Iterable[Clip], stride: int = 1, length: int = WINDOW_LENGTH,
               direction: str = None) -> List[TrackWindow]:
    windows = []
    for clip in clips:
        windows.extend(window_samples(clip, stride, length))
    if direction is not None:
        windows = [w for w in windows if w.direction == direction]

    return windows


def split_by_video(clips: Sequence[Clip], test_clip_ids: Iterable[str]) -> Tuple[List[Clip], List[Clip]]:
    test_clip_ids = set(test_clip_ids)
    known = {clip.clip_id for clip in clips}
    unknown = test_clip_ids - known
    if unknown:
        raise ConfigurationError('unknown test clip id(s): {}'.format(', '.join(sorted(unknown))))

    train = [clip for clip in clips if clip.clip_id not in test_clip_ids]
    test = [clip for clip in clips if clip.clip_id in test_clip_ids]
    logger.info('split {} clips into {} train / {} test'.format(len(clips), len(train), len(test)))

    return train, test


def direction_counts(windows: Iterable[TrackWindow]) -> 'OrderedDict[str, int]':
    counts = OrderedDict((d, 0) for d in DIRECTIONS)
    for window in windows:
        counts[window.direction] += 1

    return counts


def sample_count_table(splits: 'OrderedDict[str, Sequence[TrackWindow]]') -> PrettyTable:
    table = PrettyTable(['Dataset'] + [d.capitalize() for d in DIRECTIONS] + ['Total'])
    for name, windows in splits.items():
        counts = direction_counts(windows)
        table.add_row([name] + list(counts.values()) + [sum(counts.values())])

    return table
