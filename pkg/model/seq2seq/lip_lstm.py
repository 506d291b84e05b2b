"""Two-layer LSTM encoder-decoder predicting future person bounding boxes.

The encoder reads ``t_obsv`` steps of (location, IMU, pose) features; its
final hidden and cell states seed the decoder, which rolls out boxes for the
future offsets +2 ... +t_pred from a 4-number box input per step. With the
feature mask reduced to location only the same network is the location-only
variant.

All arrays are float64 ``(features, batch)`` columns. Backward passes are
written out per layer; there is no general autodiff.
"""
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from configs.constants import (BOX_SIZE, FEATURE_GROUPS, IMU, LAST_OBSERVED, LOCATION, NUM_IMU_CHANNELS,
                               NUM_KEYPOINTS, ORACLE_NEXT, POSE, SEED_MODES, T_OBSV, T_PRED)
from data_manager.normalizer import NormStats, normalize
from data_manager.schema import PredictionSet, TrackWindow
from exceptions import ContractError, DimensionError
from model.modules.linear import Linear
from model.modules.loss import mse_loss
from model.modules.rnn import LSTMLayer, LSTMStepCache
from model.operations import dropout_mask
from model.params import ParamStore

NUM_LAYERS = 2


@dataclass(frozen=True)
class ModelConfig:
    keypoints: int = NUM_KEYPOINTS
    t_obsv: int = T_OBSV
    t_pred: int = T_PRED
    hidden: int = 384
    layers: int = NUM_LAYERS
    dropout_p: float = 0.5
    feature_mask: Tuple[str, ...] = FEATURE_GROUPS

    def __post_init__(self):
        mask = tuple(g for g in FEATURE_GROUPS if g in set(self.feature_mask))
        unknown = set(self.feature_mask) - set(FEATURE_GROUPS)
        if unknown:
            raise ValueError('unknown feature groups: {}'.format(sorted(unknown)))
        if LOCATION not in mask:
            raise ValueError('the location features cannot be masked out')
        object.__setattr__(self, 'feature_mask', mask)

        if self.t_obsv < 2 or self.t_pred < 2:
            raise ValueError('t_obsv and t_pred must both be at least 2')
        if self.hidden < 1:
            raise ValueError('hidden size must be positive')
        if self.layers != NUM_LAYERS:
            raise ValueError('the encoder and decoder have exactly {} layers'.format(NUM_LAYERS))
        if not 0. <= self.dropout_p < 1.:
            raise ValueError('dropout must be in [0, 1)')

    @property
    def input_width(self) -> int:
        width = BOX_SIZE
        if IMU in self.feature_mask:
            width += NUM_IMU_CHANNELS
        if POSE in self.feature_mask:
            width += 2 * self.keypoints
        return width

    @property
    def num_outputs(self) -> int:
        return self.t_pred - 1

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(range(2, self.t_pred + 1))

    @property
    def window_length(self) -> int:
        return self.t_obsv + self.t_pred

    @classmethod
    def from_configs(cls, model_configs: dict) -> 'ModelConfig':
        return cls(keypoints=model_configs.get('keypoints', NUM_KEYPOINTS),
                   t_obsv=model_configs.get('t_obsv', T_OBSV),
                   t_pred=model_configs.get('t_pred', T_PRED),
                   hidden=model_configs.get('hidden', 384),
                   dropout_p=model_configs.get('dropout', 0.5),
                   feature_mask=tuple(model_configs.get('features', FEATURE_GROUPS)))

    def to_configs(self) -> dict:
        return {'keypoints': self.keypoints, 't_obsv': self.t_obsv, 't_pred': self.t_pred,
                'hidden': self.hidden, 'dropout': self.dropout_p, 'features': list(self.feature_mask)}


class EncoderContext(NamedTuple):
    hidden: Tuple[np.ndarray, np.ndarray]
    cell: Tuple[np.ndarray, np.ndarray]


class WindowBatch(NamedTuple):
    """Normalized windows stacked along a leading batch axis."""
    boxes: np.ndarray
    poses: np.ndarray
    imu: np.ndarray

    @property
    def batch_size(self) -> int:
        return self.boxes.shape[0]

    @classmethod
    def from_windows(cls, windows: Sequence[TrackWindow]) -> 'WindowBatch':
        return cls(np.stack([w.boxes for w in windows]),
                   np.stack([w.poses for w in windows]),
                   np.stack([w.imu for w in windows]))


@dataclass
class _StepCaches:
    lower: LSTMStepCache
    mask: Optional[np.ndarray]
    upper: LSTMStepCache


@dataclass
class _ForwardCache:
    encoder: List[_StepCaches] = field(default_factory=list)
    decoder: List[_StepCaches] = field(default_factory=list)
    decoder_inputs: List[np.ndarray] = field(default_factory=list)
    # per decoder step (from the second): 1 where the input was the model's own previous output
    self_fed: List[np.ndarray] = field(default_factory=list)


class LipLSTM(object):
    def __init__(self, cfg: ModelConfig) -> None:
        self.cfg = cfg
        self.encoder_layers = (LSTMLayer('encoder.l0', cfg.input_width, cfg.hidden),
                               LSTMLayer('encoder.l1', cfg.hidden, cfg.hidden))
        self.decoder_layers = (LSTMLayer('decoder.l0', BOX_SIZE, cfg.hidden),
                               LSTMLayer('decoder.l1', cfg.hidden, cfg.hidden))
        self.head = Linear('head', cfg.hidden, BOX_SIZE)

    def init_params(self, seed: int) -> ParamStore:
        rng = np.random.default_rng(seed)
        store = ParamStore()
        for layer in self.encoder_layers + self.decoder_layers:
            layer.init_params(store, rng)
        self.head.init_params(store, rng)

        return store

    def encoder_inputs(self, batch: WindowBatch) -> np.ndarray:
        """(t_obsv, input_width, batch) features: location, IMU, pose x/y, masked groups omitted."""
        cfg = self.cfg
        if batch.boxes.shape[1] < cfg.t_obsv:
            raise DimensionError('encoder_inputs', batch.boxes.shape, (batch.batch_size, cfg.t_obsv, BOX_SIZE))

        steps = slice(0, cfg.t_obsv)
        features = [batch.boxes[:, steps]]
        if IMU in cfg.feature_mask:
            features.append(batch.imu[:, steps])
        if POSE in cfg.feature_mask:
            pose_xy = batch.poses[:, steps, :cfg.keypoints, :2]
            features.append(pose_xy.reshape(batch.batch_size, cfg.t_obsv, 2 * cfg.keypoints))

        return np.ascontiguousarray(np.concatenate(features, axis=-1).transpose(1, 2, 0))

    def _two_layer_step(self, store, layers, x, hidden, cell, mask):
        lower, upper = layers
        h0, c0, lower_cache = lower.step(store, x, hidden[0], cell[0])
        upper_in = h0 * mask if mask is not None else h0
        h1, c1, upper_cache = upper.step(store, upper_in, hidden[1], cell[1])

        return (h0, h1), (c0, c1), _StepCaches(lower_cache, mask, upper_cache)

    def _mask(self, batch_size, training, rng):
        if not training or self.cfg.dropout_p == 0.:
            return None
        return dropout_mask((self.cfg.hidden, batch_size), self.cfg.dropout_p, rng)

    def encode(self, store: ParamStore, inputs: np.ndarray, training: bool = False,
               rng: np.random.Generator = None, cache: _ForwardCache = None) -> EncoderContext:
        if inputs.ndim != 3 or inputs.shape[0] != self.cfg.t_obsv or inputs.shape[1] != self.cfg.input_width:
            raise DimensionError('encode', inputs.shape, (self.cfg.t_obsv, self.cfg.input_width, None))

        batch_size = inputs.shape[2]
        hidden = tuple(layer.zero_state(batch_size)[0] for layer in self.encoder_layers)
        cell = tuple(layer.zero_state(batch_size)[1] for layer in self.encoder_layers)

        for step in range(self.cfg.t_obsv):
            mask = self._mask(batch_size, training, rng)
            hidden, cell, step_cache = self._two_layer_step(store, self.encoder_layers, inputs[step],
                                                            hidden, cell, mask)
            if cache is not None:
                cache.encoder.append(step_cache)

        return EncoderContext(hidden, cell)

    def decode(self, store: ParamStore, ctx: EncoderContext, seed_box: np.ndarray,
               teacher: Optional[np.ndarray] = None, tf_prob: float = 0., rng: np.random.Generator = None,
               training: bool = False, cache: _ForwardCache = None) -> np.ndarray:
        """Rolls out (t_pred - 1, 4, batch) normalized boxes for offsets +2 ... +t_pred.

        ``teacher`` holds the true boxes of offsets +2 ... +(t_pred - 1) as a
        (t_pred - 2, 4, batch) stack; each later step reads it with
        probability ``tf_prob``, otherwise the previous prediction.
        """
        if not 0. <= tf_prob <= 1.:
            raise ContractError('teacher forcing probability must be in [0, 1], got {}'.format(tf_prob))
        num_steps = self.cfg.num_outputs
        if training and tf_prob > 0.:
            if teacher is None:
                raise ContractError('teacher forcing requested in training mode without the true boxes')
            if teacher.shape[0] < num_steps - 1:
                raise ContractError('teacher sequence has {} boxes, need {}'.format(teacher.shape[0], num_steps - 1))

        batch_size = seed_box.shape[1]
        hidden, cell = ctx.hidden, ctx.cell
        step_input = seed_box
        outputs = []

        for step in range(num_steps):
            mask = self._mask(batch_size, training, rng)
            hidden, cell, step_cache = self._two_layer_step(store, self.decoder_layers, step_input,
                                                            hidden, cell, mask)
            prediction = self.head.forward(store, hidden[1])
            outputs.append(prediction)
            if cache is not None:
                cache.decoder.append(step_cache)
                cache.decoder_inputs.append(step_input)

            if step + 1 == num_steps:
                break

            use_teacher = self._teacher_flips(batch_size, training, tf_prob, rng)
            if use_teacher is None:
                step_input = prediction
                self_fed = np.ones((1, batch_size))
            else:
                step_input = np.where(use_teacher, teacher[step], prediction)
                self_fed = (~use_teacher).astype(np.float64)
            if cache is not None:
                cache.self_fed.append(self_fed)

        return np.stack(outputs)

    @staticmethod
    def _teacher_flips(batch_size, training, tf_prob, rng):
        if not training or tf_prob == 0.:
            return None
        if tf_prob == 1.:
            return np.ones((1, batch_size), dtype=bool)
        # one coin per decoder step and sample
        return rng.random((1, batch_size)) < tf_prob

    def forward(self, store: ParamStore, batch: WindowBatch, tf_prob: float = 0., rng: np.random.Generator = None,
                training: bool = False, seed_mode: str = None, cache: _ForwardCache = None) -> np.ndarray:
        cfg = self.cfg
        t0 = cfg.t_obsv - 1
        if training:
            seed_mode = ORACLE_NEXT
        seed_index = t0 + 1 if seed_mode == ORACLE_NEXT else t0
        if batch.boxes.shape[1] <= seed_index:
            raise ContractError('seed mode {} needs the box at step {} of the window'.format(seed_mode, seed_index))

        inputs = self.encoder_inputs(batch)
        ctx = self.encode(store, inputs, training=training, rng=rng, cache=cache)

        seed_box = np.ascontiguousarray(batch.boxes[:, seed_index].T)
        teacher = None
        if training and tf_prob > 0.:
            if batch.boxes.shape[1] < cfg.window_length - 1:
                raise ContractError('teacher forcing needs the true boxes up to offset +{}'.format(cfg.t_pred - 1))
            teacher = np.ascontiguousarray(batch.boxes[:, t0 + 2:t0 + cfg.t_pred].transpose(1, 2, 0))

        return self.decode(store, ctx, seed_box, teacher=teacher, tf_prob=tf_prob, rng=rng,
                           training=training, cache=cache)

    def targets(self, batch: WindowBatch) -> np.ndarray:
        cfg = self.cfg
        t0 = cfg.t_obsv - 1
        if batch.boxes.shape[1] < cfg.window_length:
            raise ContractError('window has {} steps, need {}'.format(batch.boxes.shape[1], cfg.window_length))
        return np.ascontiguousarray(batch.boxes[:, t0 + 2:t0 + cfg.t_pred + 1].transpose(1, 2, 0))

    def loss(self, store: ParamStore, batch: WindowBatch, tf_prob: float = 0., rng: np.random.Generator = None,
             training: bool = True) -> float:
        predictions = self.forward(store, batch, tf_prob=tf_prob, rng=rng, training=training)
        loss, _ = mse_loss(predictions, self.targets(batch))

        return loss

    def loss_and_backward(self, store: ParamStore, batch: WindowBatch, tf_prob: float = 0.,
                          rng: np.random.Generator = None, training: bool = True) -> float:
        """Forward pass plus BPTT; gradients are accumulated into ``store``."""
        cache = _ForwardCache()
        predictions = self.forward(store, batch, tf_prob=tf_prob, rng=rng, training=training, cache=cache)
        loss, dpredictions = mse_loss(predictions, self.targets(batch))
        self.backward(store, cache, dpredictions)

        return loss

    def backward(self, store: ParamStore, cache: _ForwardCache, dpredictions: np.ndarray) -> None:
        num_steps = len(cache.decoder)
        batch_size = dpredictions.shape[2]
        zeros = np.zeros((self.cfg.hidden, batch_size))
        dhidden, dcell = [zeros, zeros], [zeros, zeros]
        dnext_input = None

        for step in reversed(range(num_steps)):
            doutput = dpredictions[step]
            if dnext_input is not None:
                doutput = doutput + dnext_input * cache.self_fed[step]
            step_cache = cache.decoder[step]

            dtop = self.head.backward(store, _hidden_of(step_cache.upper), doutput)
            dinput, dhidden, dcell = self._two_layer_step_backward(store, self.decoder_layers, step_cache,
                                                                   dtop + dhidden[1], dhidden, dcell)
            dnext_input = dinput

        # the decoder's initial states are the encoder context
        for step in reversed(range(len(cache.encoder))):
            _, dhidden, dcell = self._two_layer_step_backward(store, self.encoder_layers, cache.encoder[step],
                                                              dhidden[1], dhidden, dcell)

    @staticmethod
    def _two_layer_step_backward(store, layers, step_cache: _StepCaches, dtop, dhidden, dcell):
        lower, upper = layers
        dupper_in, dh1_prev, dc1_prev = upper.step_backward(store, step_cache.upper, dtop, dcell[1])
        dh0 = dupper_in * step_cache.mask if step_cache.mask is not None else dupper_in
        dinput, dh0_prev, dc0_prev = lower.step_backward(store, step_cache.lower, dh0 + dhidden[0], dcell[0])

        return dinput, [dh0_prev, dh1_prev], [dc0_prev, dc1_prev]

    def predict(self, store: ParamStore, batch: WindowBatch, seed_mode: str = LAST_OBSERVED) -> np.ndarray:
        if seed_mode not in SEED_MODES:
            raise ValueError('unknown seed mode: {}'.format(seed_mode))
        return self.forward(store, batch, training=False, seed_mode=seed_mode)


def _hidden_of(cache: LSTMStepCache) -> np.ndarray:
    return cache.o * cache.tanh_c


## Functional surface

def init_params(cfg: ModelConfig, seed: int) -> ParamStore:
    return LipLSTM(cfg).init_params(seed)


def encode(params: ParamStore, cfg: ModelConfig, window: TrackWindow) -> EncoderContext:
    """Context of a normalized observation slice of exactly ``t_obsv`` steps."""
    if len(window) != cfg.t_obsv:
        raise DimensionError('encode', window.boxes.shape, (cfg.t_obsv, BOX_SIZE))
    model = LipLSTM(cfg)

    return model.encode(params, model.encoder_inputs(WindowBatch.from_windows([window])))


def decode(params: ParamStore, cfg: ModelConfig, ctx: EncoderContext, seed_box, teacher=None,
           tf_prob: float = 0., rng: np.random.Generator = None, training: bool = None) -> PredictionSet:
    """Single-sample decode; ``teacher`` is a (t_pred - 2, 4) sequence of true normalized boxes."""
    if training is None:
        training = teacher is not None
    seed = np.asarray(seed_box, dtype=np.float64).reshape(BOX_SIZE, 1)
    teacher_stack = None
    if teacher is not None:
        teacher_stack = np.asarray(teacher, dtype=np.float64).reshape(-1, BOX_SIZE, 1)
    if training and rng is None:
        rng = np.random.default_rng()
    model = LipLSTM(cfg)
    outputs = model.decode(params, ctx, seed, teacher=teacher_stack, tf_prob=tf_prob, rng=rng, training=training)

    return PredictionSet(outputs[:, :, 0], cfg.offsets)


def forward_loss(params: ParamStore, cfg: ModelConfig, sample: TrackWindow, tf_prob: float = 0.5,
                 rng: np.random.Generator = None, training: bool = True) -> float:
    if rng is None:
        rng = np.random.default_rng()
    return LipLSTM(cfg).loss(params, WindowBatch.from_windows([sample]), tf_prob=tf_prob, rng=rng,
                             training=training)


def predict(params: ParamStore, cfg: ModelConfig, window: TrackWindow, stats: NormStats,
            seed_mode: str = LAST_OBSERVED) -> PredictionSet:
    """Deterministic inference; returns boxes in frame pixels, clamped to the frame."""
    if seed_mode == ORACLE_NEXT and len(window) < cfg.t_obsv + 1:
        raise ContractError('oracle_next seeding needs the true box at t0+1')

    normalized = normalize(window, stats)
    outputs = LipLSTM(cfg).predict(params, WindowBatch.from_windows([normalized]), seed_mode=seed_mode)

    return PredictionSet(stats.denormalize_boxes(outputs[:, :, 0], clamp=True), cfg.offsets)
