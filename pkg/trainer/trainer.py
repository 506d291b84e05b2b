import logging
from pathlib import Path

from model.checkpoint import Checkpoint, save_checkpoint
from utils import make_dir_if_not_exist

logger = logging.getLogger(__name__)


class Trainer(object):
    def train(self):
        for i in range(self._epochs):
            self.train_loss = self._train_epoch(i)
        self._on_train_end()

        return self.train_loss

    def _save_model(self, checkpoint: Checkpoint, path: Path):
        make_dir_if_not_exist(path.parents[0])
        save_checkpoint(path, checkpoint)

    def _train_epoch(self, epoch: int):
        raise NotImplementedError()

    def _on_train_end(self):
        pass
