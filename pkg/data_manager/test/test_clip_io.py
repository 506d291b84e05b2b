import json

import numpy as np
import pytest

from data_manager import clip_io
from data_manager.clip_io import TEST_SPLIT, count_report, load_clip, load_clips, write_clip, write_clips
from data_manager.test.factory import make_clip
from exceptions import ClipParseError, ValidationError


def _assert_same_clip(loaded, clip):
    assert loaded.clip_id == clip.clip_id
    assert len(loaded.tracks) == len(clip.tracks)
    for loaded_track, track in zip(loaded.tracks, clip.tracks):
        assert (loaded_track.person_id, loaded_track.direction) == (track.person_id, track.direction)
        assert len(loaded_track) == len(track)
        for loaded_frame, frame in zip(loaded_track.frames, track.frames):
            assert loaded_frame.frame_index == frame.frame_index
            assert tuple(loaded_frame.box) == tuple(frame.box)
            assert np.array_equal(loaded_frame.pose, frame.pose)
            assert np.array_equal(loaded_frame.imu, frame.imu)


def test_write_then_load_clips(tmp_path):
    clips = [make_clip('b-clip', 'away', length=22), make_clip('a-clip', 'still', length=20)]
    write_clips(clips, tmp_path, {'a-clip': TEST_SPLIT})

    loaded = load_clips(tmp_path)

    assert [c.clip_id for c in loaded] == ['b-clip', 'a-clip']
    for loaded_clip, clip in zip(loaded, clips):
        _assert_same_clip(loaded_clip, clip)
    assert clip_io.test_clip_ids(tmp_path) == ['a-clip']


def test_clip_with_two_people(tmp_path):
    clip = make_clip('two', 'toward', length=20)
    clip.tracks.append(make_clip('two', 'across', length=20, person_id=1).tracks[0])
    write_clip(clip, tmp_path / 'two.jsonl')

    loaded = load_clip(tmp_path / 'two.jsonl')

    _assert_same_clip(loaded, clip)
    assert count_report([loaded])['tracks'] == 2


def test_empty_directory(tmp_path):
    clips = load_clips(tmp_path)

    assert clips == []
    assert count_report(clips)['frames'] == 0
    with pytest.raises(FileNotFoundError):
        load_clips(tmp_path / 'missing')


def _rewrite_line(path, line_no, **changes):
    lines = path.read_text().splitlines()
    record = json.loads(lines[line_no - 1])
    record.update(changes)
    lines[line_no - 1] = json.dumps(record)
    path.write_text('\n'.join(lines) + '\n')


def test_inverted_box_names_the_frame(tmp_path):
    path = write_clip(make_clip('bad'), tmp_path / 'bad.jsonl')
    _rewrite_line(path, 4, box=[150., 60., 100., 160.])

    with pytest.raises(ValidationError) as e:
        load_clip(path)

    assert e.value.frame_index == 3
    assert 'x1' in str(e.value)


def test_unparseable_line(tmp_path):
    path = write_clip(make_clip('broken'), tmp_path / 'broken.jsonl')
    lines = path.read_text().splitlines()
    lines[6] = '{"frame_index": 6, "box": '
    path.write_text('\n'.join(lines) + '\n')

    with pytest.raises(ClipParseError) as e:
        load_clip(path)

    assert e.value.line_no == 7


def test_missing_field(tmp_path):
    path = write_clip(make_clip('partial'), tmp_path / 'partial.jsonl')
    lines = path.read_text().splitlines()
    record = json.loads(lines[0])
    del record['imu']
    lines[0] = json.dumps(record)
    path.write_text('\n'.join(lines) + '\n')

    with pytest.raises(ClipParseError):
        load_clip(path)


def test_direction_change_is_rejected(tmp_path):
    path = write_clip(make_clip('turning', 'away'), tmp_path / 'turning.jsonl')
    _rewrite_line(path, 10, direction='toward')

    with pytest.raises(ValidationError):
        load_clip(path)


def test_unknown_direction(tmp_path):
    path = write_clip(make_clip('odd', 'sideways'), tmp_path / 'odd.jsonl')

    with pytest.raises(ValidationError):
        load_clip(path)


def test_undecodable_bytes_name_the_line(tmp_path):
    path = write_clip(make_clip('garbled'), tmp_path / 'garbled.jsonl')
    lines = path.read_bytes().splitlines()
    lines[2] = b'\xff\xfe' + lines[2]
    path.write_bytes(b'\n'.join(lines) + b'\n')

    with pytest.raises(ClipParseError) as e:
        load_clip(path)

    assert e.value.line_no == 3
    assert str(path) in str(e.value)


def test_first_bad_line_is_reported(tmp_path):
    path = write_clip(make_clip('mixed'), tmp_path / 'mixed.jsonl')
    lines = path.read_bytes().splitlines()
    record = json.loads(lines[0])
    del record['box']
    lines[0] = json.dumps(record).encode('utf-8')
    lines[1] = b'\xff\xfe'
    path.write_bytes(b'\n'.join(lines) + b'\n')

    with pytest.raises(ClipParseError) as e:
        load_clip(path)

    assert e.value.line_no == 1
