import json
import logging
import math
from pathlib import Path

import numpy as np
from torch.utils.tensorboard import SummaryWriter
from tqdm import tqdm

from configs.constants import BEST_CHECKPOINT_FILENAME, FINAL_CHECKPOINT_FILENAME, LARGE_NUMBER, \
    LIP_LSTM_METHOD, LOSS_LOG_FILENAME, RANDOM_SEED
from data_manager.normalizer import NormStats
from model.checkpoint import Checkpoint
from model.params import ParamStore
from model.seq2seq.lip_lstm import LipLSTM
from trainer.optimizer import AdamConfig, adam_step
from trainer.trainer import Trainer
from utils import make_dir_if_not_exist

logger = logging.getLogger(__name__)


class TrackPredictorTrainer(Trainer):
    """Mini-batch Adam training of the box encoder-decoder with scheduled teacher forcing."""
    def __init__(self,
                 train_data_loader,
                 valid_data_loader,
                 model: LipLSTM,
                 store: ParamStore,
                 stats: NormStats,
                 epochs: int,
                 deploy_path=Path('./tmp'),
                 adam_config: AdamConfig = AdamConfig(),
                 teacher_force_rate: float = 0.5,
                 method: str = LIP_LSTM_METHOD,
                 random_seed: int = RANDOM_SEED,
                 show_progress: bool = True,
                 enable_tensorboard: bool = True):
        if not 0. <= teacher_force_rate <= 1.:
            raise ValueError('teacher forcing rate must be in [0, 1], got {}'.format(teacher_force_rate))

        self._epochs = epochs
        self._adam_config = adam_config
        self._teacher_force_rate = teacher_force_rate
        self._random_seed = random_seed
        self._method = method
        self._show_progress = show_progress

        self._deploy_path = Path(deploy_path)
        make_dir_if_not_exist(self._deploy_path)
        self._loss_log_path = self._deploy_path / LOSS_LOG_FILENAME

        self._train_data_loader = train_data_loader
        self._valid_data_loader = valid_data_loader
        self._model = model
        self._store = store
        self._stats = stats

        # teacher-forcing coins and dropout masks
        self._rng = np.random.default_rng(random_seed)
        self._tb_writer = SummaryWriter(str(self._deploy_path / 'logs')) if enable_tensorboard else None

        self.train_loss = -1
        self.history = []
        self.best_loss = LARGE_NUMBER
        self.best_epoch = None

        with open(self._loss_log_path, 'w', encoding='utf-8'):
            pass

        logger.info('deploy path: {}'.format(self._deploy_path))
        logger.info('random seed number: {}'.format(self._random_seed))
        logger.info('learning rate: {}'.format(self._adam_config.learning_rate))
        logger.info('number of epochs: {}'.format(self._epochs))
        logger.info('batch size: {}'.format(self._train_data_loader.batch_size))
        logger.info('teacher forcing rate: {}'.format(self._teacher_force_rate))
        logger.info('dropout: {}'.format(self._model.cfg.dropout_p))

    @property
    def store(self) -> ParamStore:
        return self._store

    def checkpoint(self, epoch: int) -> Checkpoint:
        return Checkpoint(cfg=self._model.cfg, store=self._store, stats=self._stats, seed=self._random_seed,
                          method=self._method, extra={'epoch': epoch, 'train_loss': self.train_loss})

    def _eval(self) -> float:
        total, count = 0., 0
        for batch, _ in self._valid_data_loader:
            loss = self._model.loss(self._store, batch, training=False)
            total += loss * batch.batch_size
            count += batch.batch_size

        return total / count if count else math.nan

    def _train_epoch(self, epoch: int) -> float:
        tr_loss, num_samples = 0., 0

        for batch, _ in tqdm(self._train_data_loader, desc='epoch {} steps'.format(epoch + 1),
                             total=len(self._train_data_loader), disable=not self._show_progress, leave=False):
            loss = self._model.loss_and_backward(self._store, batch, tf_prob=self._teacher_force_rate,
                                                 rng=self._rng, training=True)
            adam_step(self._store, self._adam_config)

            tr_loss += loss * batch.batch_size
            num_samples += batch.batch_size

        tr_loss /= num_samples
        self.train_loss = tr_loss

        record = {'epoch': epoch + 1, 'train_loss': tr_loss}
        if self._valid_data_loader is not None:
            val_loss = self._eval()
            record['valid_loss'] = val_loss
            selection_loss = val_loss
            logger.info('epoch : {}, tr_loss : {:.6f}, val_loss : {:.6f}'.format(epoch + 1, tr_loss, val_loss))
        else:
            selection_loss = tr_loss
            logger.info('epoch : {}, tr_loss : {:.6f}'.format(epoch + 1, tr_loss))

        self.history.append(record)
        with open(self._loss_log_path, 'a', encoding='utf-8') as log_file:
            log_file.write(json.dumps(record) + '\n')

        if self._tb_writer is not None:
            for key, value in record.items():
                if key != 'epoch':
                    self._tb_writer.add_scalar(key, value, epoch + 1)

        if selection_loss < self.best_loss:
            self.best_loss = selection_loss
            self.best_epoch = epoch + 1
            self._save_model(self.checkpoint(epoch + 1), self._deploy_path / BEST_CHECKPOINT_FILENAME)

        return tr_loss

    def _on_train_end(self):
        self._save_model(self.checkpoint(self._epochs), self._deploy_path / FINAL_CHECKPOINT_FILENAME)
        if self._tb_writer is not None:
            self._tb_writer.close()
        logger.info('best epoch: {} (loss {:.6f})'.format(self.best_epoch, self.best_loss))
