"""Seeded synthetic egocentric scenes.

A camera wearer walks on a ground plane with a constant forward speed and a
head-scanning yaw profile; a single pedestrian moves with a per-class velocity
pattern. The pedestrian is projected through a pinhole camera (world x to the
right, z forward, y up) into the 455x256 frame. Every clip holds one track
whose direction label is the generating class.

IMU channels are expressed in the camera body frame: accelerometer
(forward, lateral, vertical) in m/s^2 including gravity, gyroscope
(roll, pitch, yaw) rates in rad/s.
"""
import logging
from collections import OrderedDict
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sklearn.model_selection import train_test_split
from tqdm import tqdm

from configs.constants import ACROSS, AWAY, DIRECTIONS, FPS, FRAME_HEIGHT, FRAME_WIDTH, NUM_KEYPOINTS, STILL, \
    TOWARD, WINDOW_LENGTH
from data_manager.clip_io import TEST_SPLIT, TRAIN_SPLIT
from data_manager.schema import BoundingBox, Clip, FrameObservation, PersonTrack
from exceptions import ConfigurationError
from utils import load_json

logger = logging.getLogger(__name__)

GRAVITY = 9.81
PRINCIPAL_POINT = (FRAME_WIDTH / 2., FRAME_HEIGHT / 2.)
BOX_ASPECT = 0.4
MIN_DEPTH = 1.

# BODY_25 keypoints as (u, v) fractions of the person box
SKELETON_TEMPLATE = np.array([
    (0.50, 0.07), (0.50, 0.17), (0.32, 0.19), (0.27, 0.33), (0.25, 0.46),
    (0.68, 0.19), (0.73, 0.33), (0.75, 0.46), (0.50, 0.50), (0.40, 0.50),
    (0.40, 0.72), (0.40, 0.94), (0.60, 0.50), (0.60, 0.72), (0.60, 0.94),
    (0.46, 0.05), (0.54, 0.05), (0.42, 0.06), (0.58, 0.06), (0.63, 0.99),
    (0.66, 0.98), (0.59, 0.97), (0.37, 0.99), (0.34, 0.98), (0.41, 0.97),
])
# +1 swings forward with the gait phase, -1 against it
RIGHT_LEG = (10, 11, 22, 23, 24)
LEFT_LEG = (13, 14, 19, 20, 21)
RIGHT_ARM = (3, 4)
LEFT_ARM = (6, 7)
GAIT_SWING = 0.05


@dataclass
class SceneSpec:
    counts: Dict[str, int] = field(default_factory=lambda: OrderedDict((d, 10) for d in DIRECTIONS))
    seed: int = 0
    forward_speed: Tuple[float, float] = (0., 1.4)
    # amplitude of the head-scanning yaw rate, rad/s
    yaw_rate: Tuple[float, float] = (0., 0.5)
    yaw_bias: Tuple[float, float] = (-0.05, 0.05)
    yaw_period: Tuple[float, float] = (2., 6.)
    walk_speed: Tuple[float, float] = (0.8, 1.6)
    # max deviation of the walking heading from the class pattern, rad
    heading_jitter: float = 0.15
    person_height: Tuple[float, float] = (1.6, 1.85)
    distance: Tuple[float, float] = (4., 14.)
    track_length: Tuple[int, int] = (20, 40)
    box_noise: float = 1.
    pose_noise: float = 1.5
    accel_noise: float = 0.05
    gyro_noise: float = 0.01
    focal_length: float = 230.
    camera_height: float = 1.3
    test_fraction: float = 0.2
    max_attempts: int = 100

    def __post_init__(self):
        unknown = set(self.counts) - set(DIRECTIONS)
        if unknown:
            raise ConfigurationError('unknown direction class(es) in scene spec: {}'.format(sorted(unknown)))
        if any(n < 0 for n in self.counts.values()):
            raise ConfigurationError('scene spec counts must be non-negative')
        if self.track_length[1] < WINDOW_LENGTH:
            raise ConfigurationError('track_length upper bound must be >= {}'.format(WINDOW_LENGTH))
        if not 0. <= self.test_fraction < 1.:
            raise ConfigurationError('test_fraction must be in [0, 1), got {}'.format(self.test_fraction))
        for name in ('forward_speed', 'yaw_rate', 'yaw_bias', 'yaw_period', 'walk_speed', 'person_height',
                     'distance', 'track_length'):
            low, high = getattr(self, name)
            if low > high:
                raise ConfigurationError('{} range is reversed: {}'.format(name, (low, high)))

    @classmethod
    def from_dict(cls, configs: Dict) -> 'SceneSpec':
        known = {f.name for f in fields(cls)}
        unknown = set(configs) - known
        if unknown:
            raise ConfigurationError('unknown scene spec key(s): {}'.format(', '.join(sorted(unknown))))

        values = {}
        for name, value in configs.items():
            values[name] = tuple(value) if isinstance(value, list) else value
        if 'counts' in values:
            unknown = set(values['counts']) - set(DIRECTIONS)
            if unknown:
                raise ConfigurationError('unknown direction class(es) in scene spec: {}'.format(sorted(unknown)))
            values['counts'] = OrderedDict((d, int(values['counts'].get(d, 0))) for d in DIRECTIONS)

        return cls(**values)

    def to_dict(self) -> Dict:
        return asdict(self)


def load_scene_spec(path) -> SceneSpec:
    return SceneSpec.from_dict(load_json(path))


class SimulatedTrack(NamedTuple):
    track: PersonTrack
    # per-frame camera-frame depth of the pedestrian, metres
    depths: np.ndarray
    yaw_rates: np.ndarray


def _uniform(rng: np.random.Generator, bounds) -> float:
    low, high = bounds
    return float(rng.uniform(low, high)) if high > low else float(low)


def _camera_profile(rng, spec: SceneSpec, steps: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Camera positions (steps, 2), headings and yaw rates, plus the forward speed."""
    dt = 1. / FPS
    speed = _uniform(rng, spec.forward_speed)
    amplitude = _uniform(rng, spec.yaw_rate)
    bias = _uniform(rng, spec.yaw_bias)
    period = _uniform(rng, spec.yaw_period)
    phase = float(rng.uniform(0., 2. * np.pi))

    t = np.arange(steps) * dt
    yaw_rates = bias + amplitude * np.sin(2. * np.pi * t / period + phase)

    headings = np.zeros(steps)
    positions = np.zeros((steps, 2))
    for n in range(1, steps):
        headings[n] = headings[n - 1] + yaw_rates[n - 1] * dt
        positions[n] = positions[n - 1] + speed * dt * np.array([np.sin(headings[n - 1]),
                                                                 np.cos(headings[n - 1])])

    return positions, headings, yaw_rates, speed


def _pedestrian_path(rng, spec: SceneSpec, direction: str, camera: np.ndarray) -> np.ndarray:
    dt = 1. / FPS
    steps = camera.shape[0]
    low, high = spec.distance
    if direction == TOWARD:
        depth = _uniform(rng, (max(low, (low + high) / 2.), high))
    else:
        depth = _uniform(rng, spec.distance)
    half_view = depth * PRINCIPAL_POINT[0] / spec.focal_length
    speed = _uniform(rng, spec.walk_speed)

    if direction == ACROSS:
        side = 1. if rng.uniform() < 0.5 else -1.
        start = np.array([-side * rng.uniform(0.3, 0.8) * half_view, depth])
        angle = rng.uniform(-spec.heading_jitter, spec.heading_jitter)
        velocity = side * speed * np.array([np.cos(angle), np.sin(angle)])
    else:
        start = np.array([rng.uniform(-0.5, 0.5) * half_view, depth])
        angle = rng.uniform(-spec.heading_jitter, spec.heading_jitter)
        velocity = speed * np.array([np.sin(angle), np.cos(angle)])
    if direction == STILL:
        velocity = np.zeros(2)

    path = np.zeros((steps, 2))
    path[0] = start
    for n in range(1, steps):
        if direction == TOWARD:
            offset = camera[n - 1] - path[n - 1]
            distance = np.hypot(*offset)
            step = speed * offset / distance if distance > 0. else np.zeros(2)
        elif direction == AWAY or direction == ACROSS:
            step = velocity
        else:
            step = np.zeros(2)
        path[n] = path[n - 1] + step * dt

    return path


def project(relative: np.ndarray, heading: float, height: float, spec: SceneSpec) -> Tuple[float, Optional[BoundingBox]]:
    """Camera-frame depth and image box of a pedestrian at ``relative`` world offset from the camera."""
    forward = np.array([np.sin(heading), np.cos(heading)])
    right = np.array([np.cos(heading), -np.sin(heading)])
    depth = float(relative @ forward)
    if depth < MIN_DEPTH:
        return depth, None

    lateral = float(relative @ right)
    f = spec.focal_length
    cx, cy = PRINCIPAL_POINT
    u = cx + f * lateral / depth
    half_width = f * BOX_ASPECT * height / 2. / depth
    top = cy + f * (spec.camera_height - height) / depth
    bottom = cy + f * spec.camera_height / depth

    return depth, BoundingBox(u - half_width, top, u + half_width, bottom)


def _inside(box: BoundingBox) -> bool:
    return box.x1 >= 0. and box.y1 >= 0. and box.x2 <= FRAME_WIDTH and box.y2 <= FRAME_HEIGHT


def _noisy_box(rng, box: BoundingBox, sigma: float) -> BoundingBox:
    if sigma <= 0.:
        return box
    values = np.array(box) + rng.normal(0., sigma, size=4)
    x1, x2 = sorted((values[0], values[2]))
    y1, y2 = sorted((values[1], values[3]))
    return BoundingBox(float(x1), float(y1), float(x2), float(y2)).clamp()


def skeleton(rng, box: BoundingBox, phase: float, swing: float, sigma: float) -> np.ndarray:
    """(K, 3) keypoints of the template placed in ``box`` with gait swing and pixel noise."""
    template = SKELETON_TEMPLATE.copy()
    offset = swing * np.sin(phase)
    template[list(RIGHT_LEG), 0] += offset
    template[list(LEFT_LEG), 0] -= offset
    template[list(RIGHT_ARM), 0] -= 0.8 * offset
    template[list(LEFT_ARM), 0] += 0.8 * offset

    pose = np.empty((NUM_KEYPOINTS, 3))
    pose[:, 0] = box.x1 + template[:, 0] * box.width
    pose[:, 1] = box.y1 + template[:, 1] * box.height
    if sigma > 0.:
        pose[:, :2] += rng.normal(0., sigma, size=(NUM_KEYPOINTS, 2))
    pose[:, 0] = np.clip(pose[:, 0], 0., FRAME_WIDTH)
    pose[:, 1] = np.clip(pose[:, 1], 0., FRAME_HEIGHT)
    pose[:, 2] = rng.uniform(0.6, 1., size=NUM_KEYPOINTS)

    return pose


def imu_reading(rng, speed: float, yaw_rate: float, bob_phase: float, spec: SceneSpec) -> np.ndarray:
    bob = 1.2 * speed / 1.4
    accel = np.array([0.3 * bob * np.sin(2. * bob_phase),
                      speed * yaw_rate,
                      GRAVITY + bob * np.sin(bob_phase)])
    gyro = np.array([0., 0., yaw_rate])
    if spec.accel_noise > 0.:
        accel = accel + rng.normal(0., spec.accel_noise, size=3)
    if spec.gyro_noise > 0.:
        gyro = gyro + rng.normal(0., spec.gyro_noise, size=3)

    return np.concatenate([accel, gyro])


def simulate_track(rng: np.random.Generator, spec: SceneSpec, direction: str,
                   person_id: int = 0) -> Optional[SimulatedTrack]:
    """One attempt at a track, cut where it leaves the frame or a toward pedestrian stops getting closer.

    Returns None when the cut leaves less than a full window.
    """
    if direction not in DIRECTIONS:
        raise ConfigurationError('unknown direction class {!r}'.format(direction))

    dt = 1. / FPS
    steps = int(rng.integers(spec.track_length[0], spec.track_length[1] + 1))
    camera, headings, yaw_rates, camera_speed = _camera_profile(rng, spec, steps)
    path = _pedestrian_path(rng, spec, direction, camera)
    height = _uniform(rng, spec.person_height)

    swing = 0. if direction == STILL else GAIT_SWING
    gait_frequency = rng.uniform(1.7, 2.1)
    gait_phase = rng.uniform(0., 2. * np.pi)
    bob_frequency = rng.uniform(1.7, 2.1)
    bob_phase = rng.uniform(0., 2. * np.pi)

    track = PersonTrack(person_id, direction)
    depths = []
    for n in range(steps):
        depth, box = project(path[n] - camera[n], headings[n], height, spec)
        if box is None or not _inside(box):
            break
        if direction == TOWARD and depths and depth >= depths[-1]:
            break
        t = n * dt
        observed = _noisy_box(rng, box, spec.box_noise)
        pose = skeleton(rng, box, gait_phase + 2. * np.pi * gait_frequency * t, swing, spec.pose_noise)
        imu = imu_reading(rng, camera_speed, yaw_rates[n], bob_phase + 2. * np.pi * bob_frequency * t, spec)
        track.frames.append(FrameObservation(n, observed, pose, imu))
        depths.append(depth)

    if len(track) < WINDOW_LENGTH:
        return None

    return SimulatedTrack(track, np.array(depths), yaw_rates[:len(track)].copy())


def generate_clip(spec: SceneSpec, direction: str, index: int, seed: int = None) -> Optional[Clip]:
    seed = spec.seed if seed is None else seed
    rng = np.random.default_rng([seed, DIRECTIONS.index(direction), index])
    for _ in range(spec.max_attempts):
        simulated = simulate_track(rng, spec, direction)
        if simulated is not None:
            return Clip('synth-{}-{:04d}'.format(direction, index), [simulated.track])

    logger.warning('no {} track of {} frames after {} attempts'.format(direction, WINDOW_LENGTH, spec.max_attempts))
    return None


def synth_generate(spec: SceneSpec, seed: int = None, show_progress: bool = False) -> List[Clip]:
    jobs = [(direction, n) for direction in DIRECTIONS for n in range(spec.counts.get(direction, 0))]
    clips = []
    for direction, n in tqdm(jobs, desc='synth', disable=not show_progress):
        clip = generate_clip(spec, direction, n, seed)
        if clip is not None:
            clips.append(clip)

    return clips


def clip_direction(clip: Clip) -> str:
    return clip.tracks[0].direction


def assign_splits(clips: Sequence[Clip], test_fraction: float, seed: int) -> Dict[str, str]:
    """Clip-level train/test assignment, stratified by direction class when the counts allow it."""
    splits = OrderedDict((clip.clip_id, TRAIN_SPLIT) for clip in clips)
    if test_fraction <= 0. or len(clips) < 2:
        return splits

    clip_ids = [clip.clip_id for clip in clips]
    labels = [clip_direction(clip) for clip in clips]
    try:
        _, test_ids = train_test_split(clip_ids, test_size=test_fraction, random_state=seed, stratify=labels)
    except ValueError:
        logger.warning('too few clips per class to stratify; splitting without stratification')
        _, test_ids = train_test_split(clip_ids, test_size=test_fraction, random_state=seed)

    for clip_id in test_ids:
        splits[clip_id] = TEST_SPLIT

    return splits
