"""Self-describing checkpoint container.

A ZIP archive with fixed member timestamps so identical training runs give
byte-identical files. ``meta.json`` holds the format tag, model config,
normalization statistics, seed and optimizer step; every tensor is stored as
a little-endian float64 ``.npy`` member under ``params/``, ``adam_m/`` or
``adam_v/``.
"""
import io
import json
import logging
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Dict

import numpy as np

from configs.constants import CHECKPOINT_FORMAT
from data_manager.normalizer import NormStats
from model.params import ParamStore
from model.seq2seq.lip_lstm import ModelConfig
from utils import make_dir_if_not_exist

logger = logging.getLogger(__name__)

_FIXED_DATE = (1980, 1, 1, 0, 0, 0)
_META = 'meta.json'
_GROUPS = (('params', 'params'), ('adam_m', 'first_moments'), ('adam_v', 'second_moments'))


@dataclass
class Checkpoint:
    cfg: ModelConfig
    store: ParamStore
    stats: NormStats
    seed: int
    method: str
    extra: Dict = None


def save_checkpoint(path, checkpoint: Checkpoint) -> Path:
    path = Path(path)
    make_dir_if_not_exist(path.parent)

    meta = {'format': CHECKPOINT_FORMAT,
            'method': checkpoint.method,
            'model': checkpoint.cfg.to_configs(),
            'norm_stats': checkpoint.stats.to_dict(),
            'seed': checkpoint.seed,
            'step': checkpoint.store.step,
            'param_names': checkpoint.store.names(),
            'extra': checkpoint.extra or {}}

    state = checkpoint.store.state()
    with zipfile.ZipFile(path, 'w', compression=zipfile.ZIP_DEFLATED) as archive:
        _write_member(archive, _META, json.dumps(meta, indent=2, sort_keys=True).encode('utf-8'))
        for prefix, key in _GROUPS:
            for name, tensor in state[key].items():
                _write_member(archive, '{}/{}.npy'.format(prefix, name), _npy_bytes(tensor))

    logger.info('saved checkpoint: {}'.format(path))

    return path


def load_checkpoint(path) -> Checkpoint:
    with zipfile.ZipFile(path, 'r') as archive:
        meta = json.loads(archive.read(_META).decode('utf-8'))
        if meta.get('format') != CHECKPOINT_FORMAT:
            raise ValueError('{}: unsupported checkpoint format {!r}'.format(path, meta.get('format')))

        tensors = {}
        for prefix, key in _GROUPS:
            tensors[key] = {name: np.load(io.BytesIO(archive.read('{}/{}.npy'.format(prefix, name))))
                            for name in meta['param_names']}

    store = ParamStore()
    store.load_state(tensors['params'], tensors['first_moments'], tensors['second_moments'], step=meta['step'])

    return Checkpoint(cfg=ModelConfig.from_configs(meta['model']),
                      store=store,
                      stats=NormStats.from_dict(meta['norm_stats']),
                      seed=meta['seed'],
                      method=meta['method'],
                      extra=meta.get('extra', {}))


def _npy_bytes(tensor: np.ndarray) -> bytes:
    buffer = io.BytesIO()
    np.lib.format.write_array(buffer, np.ascontiguousarray(tensor, dtype='<f8'), allow_pickle=False)
    return buffer.getvalue()


def _write_member(archive: zipfile.ZipFile, name: str, payload: bytes) -> None:
    info = zipfile.ZipInfo(name, date_time=_FIXED_DATE)
    info.compress_type = zipfile.ZIP_DEFLATED
    info.external_attr = 0o644 << 16
    archive.writestr(info, payload)
