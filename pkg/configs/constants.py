## Frame geometry of the downsampled egocentric videos
FRAME_WIDTH = 455
FRAME_HEIGHT = 256
FPS = 10

NUM_KEYPOINTS = 25
NUM_IMU_CHANNELS = 6
BOX_SIZE = 4

T_OBSV = 10
T_PRED = 10
WINDOW_LENGTH = T_OBSV + T_PRED

## Walking directions, in report column order
TOWARD = 'toward'
AWAY = 'away'
ACROSS = 'across'
STILL = 'still'
DIRECTIONS = (TOWARD, AWAY, ACROSS, STILL)

## Encoder feature groups
LOCATION = 'location'
IMU = 'imu'
POSE = 'pose'
FEATURE_GROUPS = (LOCATION, IMU, POSE)

## Predictor names, in report row order
STATS_METHOD = 'stats'
LR_METHOD = 'lr'
L_LSTM_METHOD = 'l_lstm'
LIP_LSTM_METHOD = 'lip_lstm'
GROUND_TRUTH_METHOD = 'ground_truth'
METHOD_ORDER = (STATS_METHOD, LR_METHOD, L_LSTM_METHOD, LIP_LSTM_METHOD)
METHOD_TITLES = {STATS_METHOD: 'STATS',
                 LR_METHOD: 'LR',
                 L_LSTM_METHOD: 'L-LSTM',
                 LIP_LSTM_METHOD: 'LIP-LSTM',
                 GROUND_TRUTH_METHOD: 'GROUND-TRUTH'}

LAST_OBSERVED = 'last_observed'
ORACLE_NEXT = 'oracle_next'
SEED_MODES = (LAST_OBSERVED, ORACLE_NEXT)

## Files
MANIFEST_FILENAME = 'manifest.json'
CLIP_FILE_SUFFIX = '.jsonl'
RUN_CONFIG_FILENAME = 'run_config.json'
LOSS_LOG_FILENAME = 'loss_log.jsonl'
FINAL_CHECKPOINT_FILENAME = 'final.ckpt'
BEST_CHECKPOINT_FILENAME = 'best.ckpt'
REPORT_TABLE_FILENAME = 'report.txt'
REPORT_RECORD_FILENAME = 'report.jsonl'
PREDICTIONS_FILENAME = 'predictions.jsonl'
BENCHMARK_TABLE_FILENAME = 'benchmark.txt'
BENCHMARK_RECORD_FILENAME = 'benchmark.jsonl'
CHECKPOINT_FORMAT = 'lip-lstm-checkpoint/1'

DATA_ROOT_ENV = 'EILT_DATA_ROOT'
DEFAULT_DATA_ROOT = './data/eilt'

GRADCHECK_THRESHOLD = 1e-5
MIN_DEGENERATE_X_VARIANCE = 1e-6

RANDOM_SEED = 49
LARGE_NUMBER = 2e16

DEFAULT_CONFIGS = {
    'type': LIP_LSTM_METHOD,
    'random_seed': RANDOM_SEED,
    'dataset': {
        'path': None,
        'stride': 1,
        'direction': None,
        'limit_samples': None,
    },
    'model': {
        'keypoints': NUM_KEYPOINTS,
        't_obsv': T_OBSV,
        't_pred': T_PRED,
        'hidden': 384,
        'dropout': 0.5,
        'features': list(FEATURE_GROUPS),
    },
    'train': {
        'epochs': 100,
        'batch_size': 64,
        'learning_rate': 1e-3,
        'beta1': 0.9,
        'beta2': 0.999,
        'epsilon': 1e-8,
        'teacher_force_rate': 0.5,
        'valid_fraction': 0.,
    },
    'eval': {
        'seed_mode': LAST_OBSERVED,
    },
    'deploy': {
        'path': './tmp/lip_lstm',
    },
}
