from pathlib import Path

from configs.constants import L_LSTM_METHOD, LIP_LSTM_METHOD, LOCATION
from data_manager.builder import TrackDatasetBuilder
from exceptions import ConfigurationError
from model.seq2seq.lip_lstm import LipLSTM, ModelConfig
from trainer.optimizer import AdamConfig
from trainer.seq2seq_trainer import TrackPredictorTrainer

TRAINABLE_METHODS = (LIP_LSTM_METHOD, L_LSTM_METHOD)


def create_trainer(type, data_builder: TrackDatasetBuilder, model_configs, train_configs, random_seed,
                   deploy_path='./tmp', show_progress=True, enable_tensorboard=True):
    if type not in TRAINABLE_METHODS:
        raise ConfigurationError('{!r} is not a trainable model type'.format(type))

    if type == L_LSTM_METHOD:
        model_configs = dict(model_configs, features=[LOCATION])
    cfg = ModelConfig.from_configs(model_configs)
    model = LipLSTM(cfg)
    store = model.init_params(random_seed)
    stats = data_builder.stats

    train_data_loader = data_builder.build_data_loader(train_configs['batch_size'], stats=stats,
                                                       random_seed=random_seed)
    valid_data_loader = data_builder.build_valid_data_loader(train_configs['batch_size'], stats=stats)

    adam_config = AdamConfig(learning_rate=train_configs['learning_rate'],
                             beta1=train_configs.get('beta1', 0.9),
                             beta2=train_configs.get('beta2', 0.999),
                             epsilon=train_configs.get('epsilon', 1e-8))

    return TrackPredictorTrainer(train_data_loader,
                                 valid_data_loader,
                                 model,
                                 store,
                                 stats,
                                 train_configs['epochs'],
                                 deploy_path=Path(deploy_path),
                                 adam_config=adam_config,
                                 teacher_force_rate=train_configs['teacher_force_rate'],
                                 method=type,
                                 random_seed=random_seed,
                                 show_progress=show_progress,
                                 enable_tensorboard=enable_tensorboard)
