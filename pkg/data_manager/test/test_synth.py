import numpy as np
import pytest

from configs.constants import DIRECTIONS, STILL, TOWARD, WINDOW_LENGTH
from data_manager.clip_io import TEST_SPLIT, load_clips
from data_manager.synth import SceneSpec, assign_splits, clip_direction, load_scene_spec, simulate_track, \
    synth_generate
from data_manager.test.factory import write_synth_dataset
from exceptions import ConfigurationError

static_world = {'forward_speed': (0., 0.), 'yaw_rate': (0., 0.), 'yaw_bias': (0., 0.), 'heading_jitter': 0.,
                'box_noise': 0., 'pose_noise': 0., 'accel_noise': 0.}


def _spec(**values):
    base = {'counts': {d: 2 for d in DIRECTIONS}, 'seed': 4, 'track_length': (20, 26)}
    base.update(values)
    return SceneSpec.from_dict(base)


def test_same_seed_same_clips():
    first, second = synth_generate(_spec()), synth_generate(_spec())

    assert [c.clip_id for c in first] == [c.clip_id for c in second]
    for a, b in zip(first, second):
        for fa, fb in zip(a.tracks[0].frames, b.tracks[0].frames):
            assert tuple(fa.box) == tuple(fb.box)
            assert np.array_equal(fa.pose, fb.pose)
            assert np.array_equal(fa.imu, fb.imu)


def test_generated_clips_are_valid():
    clips = synth_generate(_spec(seed=9))

    assert [clip_direction(c) for c in clips] == [d for d in DIRECTIONS for _ in range(2)]
    for clip in clips:
        clip.validate()
        assert len(clip.tracks[0]) >= WINDOW_LENGTH


def test_still_person_with_still_camera():
    spec = _spec(counts={STILL: 3}, gyro_noise=0.01, **static_world)

    for clip in synth_generate(spec):
        boxes = np.array([frame.box for frame in clip.tracks[0].frames])
        gyro = np.array([frame.imu[3:] for frame in clip.tracks[0].frames])
        assert np.all(boxes == boxes[0])
        assert np.all(np.abs(gyro) < 0.06)


def test_toward_track_approaches():
    spec = _spec(gyro_noise=0., **static_world)
    rng = np.random.default_rng(0)

    simulated = None
    while simulated is None:
        simulated = simulate_track(rng, spec, TOWARD)

    heights = np.array([frame.box.height for frame in simulated.track.frames])
    assert np.all(np.diff(simulated.depths) < 0.)
    assert np.all(np.diff(heights) > 0.)


def test_toward_tracks_approach_with_a_moving_camera():
    spec = _spec(box_noise=0., pose_noise=0.)
    rng = np.random.default_rng(5)

    tracks = 0
    while tracks < 200:
        simulated = simulate_track(rng, spec, TOWARD)
        if simulated is None:
            continue
        tracks += 1
        heights = np.array([frame.box.height for frame in simulated.track.frames])
        assert np.all(np.diff(simulated.depths) < 0.)
        assert np.all(np.diff(heights) > -1e-9)


def test_spec_validation(tmp_path):
    with pytest.raises(ConfigurationError):
        SceneSpec.from_dict({'counts': {'sideways': 1}})
    with pytest.raises(ConfigurationError):
        SceneSpec.from_dict({'counts': {'towards': 5, 'away': 1}})
    with pytest.raises(ConfigurationError):
        SceneSpec.from_dict({'fov': 90})
    with pytest.raises(ConfigurationError):
        SceneSpec.from_dict({'track_length': [10, 15]})
    with pytest.raises(ConfigurationError):
        simulate_track(np.random.default_rng(0), SceneSpec(), 'sideways')

    path = tmp_path / 'scene.json'
    path.write_text('{"counts": {"away": 3}, "distance": [5, 8]}')
    spec = load_scene_spec(path)
    assert spec.counts[TOWARD] == 0 and spec.counts['away'] == 3
    assert spec.distance == (5, 8)


def test_assign_splits_is_stratified():
    clips = synth_generate(_spec(counts={d: 5 for d in DIRECTIONS}))

    splits = assign_splits(clips, 0.2, seed=0)

    test = [c for c in clips if splits[c.clip_id] == TEST_SPLIT]
    assert len(test) == 4
    assert sorted(clip_direction(c) for c in test) == sorted(DIRECTIONS)
    assert assign_splits(clips, 0.2, seed=0) == splits


def test_written_dataset_loads(tmp_path):
    clips = write_synth_dataset(tmp_path)

    assert [c.clip_id for c in load_clips(tmp_path)] == [c.clip_id for c in clips]
