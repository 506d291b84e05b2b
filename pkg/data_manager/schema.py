"""In-memory representation of annotated egocentric clips.

Coordinates are pixels of the 455x256 frame, origin top-left. A clip holds
one or more person tracks; a track is a run of consecutive frame observations
of one targeted person with one walking-direction label.
"""
from dataclasses import dataclass, field, replace
from typing import Iterator, List, NamedTuple, Tuple

import numpy as np

from configs.constants import BOX_SIZE, DIRECTIONS, FRAME_HEIGHT, FRAME_WIDTH, NUM_IMU_CHANNELS, NUM_KEYPOINTS
from exceptions import ValidationError


class BoundingBox(NamedTuple):
    x1: float
    y1: float
    x2: float
    y2: float

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x1 + self.x2) / 2., (self.y1 + self.y2) / 2.

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    def clamp(self, width: float = FRAME_WIDTH, height: float = FRAME_HEIGHT) -> 'BoundingBox':
        return BoundingBox(min(max(self.x1, 0.), width), min(max(self.y1, 0.), height),
                           min(max(self.x2, 0.), width), min(max(self.y2, 0.), height))

    def validate(self, frame_index: int, clip_id: str = None,
                 width: float = FRAME_WIDTH, height: float = FRAME_HEIGHT) -> None:
        if not all(np.isfinite(self)):
            raise ValidationError('box', frame_index, 'non-finite coordinate {}'.format(tuple(self)), clip_id)
        if self.x1 > self.x2:
            raise ValidationError('box.x1', frame_index, 'x1 {} > x2 {}'.format(self.x1, self.x2), clip_id)
        if self.y1 > self.y2:
            raise ValidationError('box.y1', frame_index, 'y1 {} > y2 {}'.format(self.y1, self.y2), clip_id)
        if self.x1 < 0. or self.x2 > width or self.y1 < 0. or self.y2 > height:
            raise ValidationError('box', frame_index, '{} outside the {}x{} frame'.format(tuple(self), width, height),
                                  clip_id)


@dataclass
class FrameObservation:
    frame_index: int
    box: BoundingBox
    # (K, 3): x px, y px, confidence; undetected keypoints are (0, 0, 0)
    pose: np.ndarray
    # accelerometer xyz m/s^2, gyroscope xyz rad/s
    imu: np.ndarray

    def validate(self, clip_id: str = None) -> None:
        self.box.validate(self.frame_index, clip_id)
        if self.pose.shape != (NUM_KEYPOINTS, 3):
            raise ValidationError('pose', self.frame_index,
                                  'expected {} keypoint triples, got shape {}'.format(NUM_KEYPOINTS, self.pose.shape),
                                  clip_id)
        if not np.all(np.isfinite(self.pose)):
            raise ValidationError('pose', self.frame_index, 'non-finite keypoint', clip_id)
        confidence = self.pose[:, 2]
        if np.any(confidence < 0.) or np.any(confidence > 1.):
            raise ValidationError('pose.confidence', self.frame_index, 'confidence outside [0, 1]', clip_id)
        if self.imu.shape != (NUM_IMU_CHANNELS,):
            raise ValidationError('imu', self.frame_index,
                                  'expected {} channels, got shape {}'.format(NUM_IMU_CHANNELS, self.imu.shape),
                                  clip_id)
        if not np.all(np.isfinite(self.imu)):
            raise ValidationError('imu', self.frame_index, 'non-finite channel', clip_id)

    @property
    def has_pose(self) -> bool:
        return bool(np.any(self.pose[:, :2] != 0.))


@dataclass
class PersonTrack:
    person_id: int
    direction: str
    frames: List[FrameObservation] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frames)


@dataclass
class Clip:
    clip_id: str
    tracks: List[PersonTrack] = field(default_factory=list)

    def frames(self) -> Iterator[Tuple[PersonTrack, FrameObservation]]:
        for track in self.tracks:
            for frame in track.frames:
                yield track, frame

    def validate(self) -> None:
        for track in self.tracks:
            if track.direction not in DIRECTIONS:
                first = track.frames[0].frame_index if track.frames else -1
                raise ValidationError('direction', first, 'unknown direction {!r}'.format(track.direction),
                                      self.clip_id)
            previous = None
            for frame in track.frames:
                frame.validate(self.clip_id)
                if previous is not None and frame.frame_index <= previous:
                    raise ValidationError('frame_index', frame.frame_index,
                                          'frames of person {} are not increasing'.format(track.person_id),
                                          self.clip_id)
                previous = frame.frame_index


@dataclass
class TrackWindow:
    """One sample: t_obsv + t_pred consecutive frames of a single track.

    ``boxes`` is (T, 4), ``poses`` is (T, K, 3) and ``imu`` is (T, 6). When
    ``normalized`` is set, boxes and pose coordinates are in [0, 1] frame units
    and IMU channels are z-scored.
    """
    boxes: np.ndarray
    poses: np.ndarray
    imu: np.ndarray
    direction: str
    clip_id: str
    person_id: int
    frame_indices: np.ndarray
    normalized: bool = False

    def __len__(self) -> int:
        return self.boxes.shape[0]

    @property
    def start_frame(self) -> int:
        return int(self.frame_indices[0])

    @property
    def frame_span(self) -> Tuple[int, int]:
        return int(self.frame_indices[0]), int(self.frame_indices[-1])

    @property
    def sample_id(self) -> str:
        return '{}:{}:{}'.format(self.clip_id, self.person_id, self.start_frame)

    def box(self, step: int) -> BoundingBox:
        return BoundingBox(*self.boxes[step].tolist())

    def observations(self) -> Iterator[FrameObservation]:
        for step in range(len(self)):
            yield FrameObservation(int(self.frame_indices[step]), self.box(step), self.poses[step], self.imu[step])

    def with_arrays(self, **arrays) -> 'TrackWindow':
        return replace(self, **arrays)

    def slice(self, start: int, stop: int) -> 'TrackWindow':
        return replace(self, boxes=self.boxes[start:stop], poses=self.poses[start:stop],
                       imu=self.imu[start:stop], frame_indices=self.frame_indices[start:stop])


@dataclass
class PredictionSet:
    """Predicted boxes for future offsets; centers are the box midpoints."""
    boxes: np.ndarray
    offsets: Tuple[int, ...]
    centers: np.ndarray = field(init=False)

    def __post_init__(self):
        self.boxes = np.asarray(self.boxes, dtype=np.float64).reshape(-1, BOX_SIZE)
        self.offsets = tuple(int(o) for o in self.offsets)
        if len(self.offsets) != self.boxes.shape[0]:
            raise ValueError('{} offsets for {} boxes'.format(len(self.offsets), self.boxes.shape[0]))
        self.centers = box_centers(self.boxes)

    def __len__(self) -> int:
        return self.boxes.shape[0]

    def at(self, offset: int) -> np.ndarray:
        return self.boxes[self.offsets.index(offset)]

    def to_record(self) -> dict:
        return {'offsets': list(self.offsets),
                'boxes': self.boxes.tolist(),
                'centers': self.centers.tolist()}

    @classmethod
    def from_record(cls, record: dict) -> 'PredictionSet':
        return cls(np.array(record['boxes'], dtype=np.float64), tuple(record['offsets']))


def box_centers(boxes: np.ndarray) -> np.ndarray:
    boxes = np.asarray(boxes, dtype=np.float64)
    return np.stack([(boxes[..., 0] + boxes[..., 2]) / 2., (boxes[..., 1] + boxes[..., 3]) / 2.], axis=-1)


def future_truth(window: TrackWindow, t_obsv: int, offsets) -> PredictionSet:
    """Ground-truth boxes of ``window`` at the given future offsets, as a PredictionSet."""
    t0 = t_obsv - 1
    return PredictionSet(window.boxes[[t0 + o for o in offsets]], tuple(offsets))
