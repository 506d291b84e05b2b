"""Hand-built clips and windows for tests."""
import numpy as np

from configs.constants import NUM_IMU_CHANNELS, NUM_KEYPOINTS, WINDOW_LENGTH
from data_manager.schema import BoundingBox, Clip, FrameObservation, PersonTrack, TrackWindow


def make_pose(box, rng=None):
    rng = rng or np.random.default_rng(0)
    x1, y1, x2, y2 = box
    pose = np.empty((NUM_KEYPOINTS, 3))
    pose[:, 0] = rng.uniform(x1, x2, NUM_KEYPOINTS)
    pose[:, 1] = rng.uniform(y1, y2, NUM_KEYPOINTS)
    pose[:, 2] = rng.uniform(0.5, 1., NUM_KEYPOINTS)
    return pose


def make_window(boxes, direction='across', rng=None, clip_id='clip', person_id=0, start=0):
    rng = rng or np.random.default_rng(0)
    boxes = np.asarray(boxes, dtype=np.float64)
    steps = boxes.shape[0]
    return TrackWindow(boxes=boxes,
                       poses=np.stack([make_pose(b, rng) for b in boxes]),
                       imu=rng.normal(size=(steps, NUM_IMU_CHANNELS)),
                       direction=direction,
                       clip_id=clip_id,
                       person_id=person_id,
                       frame_indices=np.arange(start, start + steps))


def linear_boxes(steps=WINDOW_LENGTH, start=(100., 60., 140., 160.), velocity=(2., 0.5, 2.5, 1.)):
    return np.asarray(start) + np.arange(steps)[:, None] * np.asarray(velocity)


def random_boxes(rng, steps=WINDOW_LENGTH):
    x1 = rng.uniform(20., 300., steps)
    y1 = rng.uniform(10., 120., steps)
    return np.stack([x1, y1, x1 + rng.uniform(10., 100., steps), y1 + rng.uniform(20., 120., steps)], axis=1)


def random_window(rng, direction='across', steps=WINDOW_LENGTH, **kwargs):
    return make_window(random_boxes(rng, steps), direction, rng, **kwargs)


def make_clip(clip_id, direction='across', length=WINDOW_LENGTH, person_id=0, start=0, rng=None):
    rng = rng or np.random.default_rng(0)
    frames = []
    for n, box in enumerate(linear_boxes(length)):
        box = BoundingBox(*box.tolist())
        frames.append(FrameObservation(start + n, box, make_pose(box, rng), rng.normal(size=NUM_IMU_CHANNELS)))
    return Clip(clip_id, [PersonTrack(person_id, direction, frames)])


def write_synth_dataset(out_dir, **spec_values):
    """Small synthetic clip directory with a manifest; returns the clips."""
    from data_manager.clip_io import write_clips
    from data_manager.synth import SceneSpec, assign_splits, synth_generate

    values = dict(counts={'toward': 2, 'away': 2, 'across': 2, 'still': 2}, seed=3, track_length=(20, 24),
                  test_fraction=0.5)
    values.update(spec_values)
    spec = SceneSpec.from_dict(values)
    clips = synth_generate(spec)
    write_clips(clips, out_dir, assign_splits(clips, spec.test_fraction, spec.seed))
    return clips
