"""Line-delimited clip files.

One UTF-8 file per clip, one frame record per line::

    {"box": [x1, y1, x2, y2], "clip_id": "...", "direction": "away", "frame_index": 12,
     "imu": [ax, ay, az, gx, gy, gz], "person_id": 0, "pose": [[x, y, c], ... 25 triples]}

A ``manifest.json`` beside the clip files lists every clip with its file name
and split assignment (``train`` or ``test``).
"""
import json
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from configs.constants import CLIP_FILE_SUFFIX, DIRECTIONS, MANIFEST_FILENAME
from data_manager.schema import BoundingBox, Clip, FrameObservation, PersonTrack
from exceptions import ClipParseError, ValidationError
from utils import make_dir_if_not_exist

logger = logging.getLogger(__name__)

MANIFEST_FORMAT = 'eilt-clips/1'
TRAIN_SPLIT = 'train'
TEST_SPLIT = 'test'
_FIELDS = ('frame_index', 'box', 'pose', 'imu', 'person_id', 'direction', 'clip_id')


def frame_record(clip_id: str, track: PersonTrack, frame: FrameObservation) -> str:
    record = OrderedDict([('clip_id', clip_id),
                          ('person_id', int(track.person_id)),
                          ('direction', track.direction),
                          ('frame_index', int(frame.frame_index)),
                          ('box', [float(v) for v in frame.box]),
                          ('pose', frame.pose.tolist()),
                          ('imu', frame.imu.tolist())])
    return json.dumps(record)


def write_clip(clip: Clip, path) -> Path:
    path = Path(path)
    make_dir_if_not_exist(path.parent)
    with open(path, 'w', encoding='utf-8') as clip_file:
        for track, frame in clip.frames():
            clip_file.write(frame_record(clip.clip_id, track, frame) + '\n')

    return path


def write_clips(clips: Sequence[Clip], out_dir, splits: Dict[str, str] = None) -> Path:
    out_dir = Path(out_dir)
    make_dir_if_not_exist(out_dir)
    splits = splits or {}

    entries = []
    for clip in clips:
        filename = clip.clip_id + CLIP_FILE_SUFFIX
        write_clip(clip, out_dir / filename)
        entries.append({'clip_id': clip.clip_id, 'file': filename, 'split': splits.get(clip.clip_id, TRAIN_SPLIT)})

    manifest_path = out_dir / MANIFEST_FILENAME
    with open(manifest_path, 'w', encoding='utf-8') as manifest_file:
        json.dump({'format': MANIFEST_FORMAT, 'clips': entries}, manifest_file, indent=2, sort_keys=True)
        manifest_file.write('\n')

    logger.info('wrote {} clips to {}'.format(len(clips), out_dir))

    return manifest_path


def load_manifest(path) -> List[Dict]:
    manifest_path = Path(path) / MANIFEST_FILENAME
    if not manifest_path.exists():
        return []
    with open(manifest_path, encoding='utf-8') as manifest_file:
        manifest = json.load(manifest_file)

    return manifest.get('clips', [])


def test_clip_ids(path) -> List[str]:
    return [entry['clip_id'] for entry in load_manifest(path) if entry.get('split') == TEST_SPLIT]


def load_clip(path) -> Clip:
    path = Path(path)
    clip_id = None
    tracks = OrderedDict()

    with open(path, 'rb') as clip_file:
        for line_no, raw in enumerate(clip_file, start=1):
            if not raw.strip():
                continue
            record = _parse_line(path, line_no, raw)

            if clip_id is None:
                clip_id = record['clip_id']
            elif record['clip_id'] != clip_id:
                raise ClipParseError(path, line_no, 'clip_id {!r} differs from {!r}'.format(record['clip_id'],
                                                                                          clip_id))

            person_id = record['person_id']
            track = tracks.get(person_id)
            if track is None:
                track = tracks[person_id] = PersonTrack(person_id, record['direction'])
            elif track.direction != record['direction']:
                raise ValidationError('direction', record['frame_index'],
                                      'person {} changes direction'.format(person_id), clip_id)
            track.frames.append(record['frame'])

    if clip_id is None:
        clip_id = path.stem
    clip = Clip(clip_id, list(tracks.values()))
    clip.validate()

    return clip


def load_clips(path) -> List[Clip]:
    """Every clip under ``path``; files listed in the manifest first, in manifest order."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)

    listed = [path / entry['file'] for entry in load_manifest(path)]
    unlisted = sorted(p for p in path.glob('*' + CLIP_FILE_SUFFIX) if p not in set(listed))
    clips = [load_clip(clip_path) for clip_path in listed + unlisted]

    counts = count_report(clips)
    logger.info('loaded {} clips, {} tracks, {} frames from {}'.format(counts['clips'], counts['tracks'],
                                                                       counts['frames'], path))

    return clips


def count_report(clips: Sequence[Clip]) -> Dict:
    frames = OrderedDict((d, 0) for d in DIRECTIONS)
    tracks = 0
    for clip in clips:
        for track in clip.tracks:
            tracks += 1
            frames[track.direction] = frames.get(track.direction, 0) + len(track)

    return {'clips': len(clips), 'tracks': tracks, 'frames': sum(frames.values()), 'frames_per_direction': frames}


def _parse_line(path, line_no: int, raw: bytes) -> Dict:
    try:
        record = json.loads(raw.decode('utf-8'))
    except UnicodeDecodeError as e:
        raise ClipParseError(path, line_no, 'invalid UTF-8 at byte {}'.format(e.start))
    except json.JSONDecodeError as e:
        raise ClipParseError(path, line_no, 'invalid JSON: {}'.format(e.msg))

    if not isinstance(record, dict):
        raise ClipParseError(path, line_no, 'record is not an object')
    missing = [name for name in _FIELDS if name not in record]
    if missing:
        raise ClipParseError(path, line_no, 'missing field(s): {}'.format(', '.join(missing)))

    try:
        frame_index = int(record['frame_index'])
        box = BoundingBox(*[float(v) for v in record['box']]).clamp()
        pose = np.array(record['pose'], dtype=np.float64)
        imu = np.array(record['imu'], dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ClipParseError(path, line_no, 'bad field value: {}'.format(e))

    return {'clip_id': str(record['clip_id']),
            'person_id': int(record['person_id']),
            'direction': str(record['direction']),
            'frame_index': frame_index,
            'frame': FrameObservation(frame_index, box, pose, imu)}
