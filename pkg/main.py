"""Person box and trajectory prediction for egocentric video.

Subcommands:
    synth      generate a seeded synthetic dataset (clip files + manifest)
    train      train the LIP-LSTM or the location-only L-LSTM
    eval       score STATS, LR and trained models on the test split
    predict    write per-window predictions as JSON lines
    plot       render overlays of predictions at t0+5 and t0+10
    gradcheck  finite-difference check of the backward pass
    benchmark  synth, train and eval over several seeds and check the Mean DE ranking

Configuration precedence: command-line flags > config file (-c) > built-in
defaults. EILT_DATA_ROOT sets the data directory when neither a flag nor the
config file does.
"""
import argparse
import logging
import sys
from pathlib import Path

from agents.commands import cmd_benchmark, cmd_eval, cmd_gradcheck, cmd_plot, cmd_predict, cmd_synth, cmd_train
from configs.constants import DIRECTIONS, GRADCHECK_THRESHOLD, L_LSTM_METHOD, LIP_LSTM_METHOD, LR_METHOD, \
    METHOD_ORDER, SEED_MODES, STATS_METHOD, GROUND_TRUTH_METHOD
from data_manager.synth import load_scene_spec
from utils import resolve_configs, set_logging_config

logger = logging.getLogger(__name__)

SCRIPTS_PATH = Path(__file__).parent / 'scripts'
DEFAULT_SCENE_SPEC = SCRIPTS_PATH / 'synth' / 'default_scene.json'
BENCHMARK_SCENE_SPEC = SCRIPTS_PATH / 'synth' / 'benchmark_scene.json'
BENCHMARK_TRAIN_CONFIGS = (SCRIPTS_PATH / 'train' / 'l_lstm_configs.json',
                           SCRIPTS_PATH / 'train' / 'lip_lstm_configs.json')


def _add_data_arguments(parser):
    parser.add_argument('-c', '--configs_path', dest='configs_path', type=str,
                        help='configuration file path')
    parser.add_argument('--data', dest='data_path', type=str, help='clip directory (overrides EILT_DATA_ROOT)')
    parser.add_argument('--stride', type=int, help='sliding-window stride')
    parser.add_argument('--direction', choices=DIRECTIONS, help='use windows of one walking direction only')
    parser.add_argument('--seed', type=int, help='random seed')


def _add_eval_arguments(parser):
    _add_data_arguments(parser)
    parser.add_argument('--methods', nargs='+', choices=METHOD_ORDER + (GROUND_TRUTH_METHOD,),
                        default=[STATS_METHOD, LR_METHOD], help='methods to run, in report order')
    parser.add_argument('--lip-lstm', dest='lip_lstm', type=str, help='LIP-LSTM checkpoint')
    parser.add_argument('--l-lstm', dest='l_lstm', type=str, help='L-LSTM checkpoint')
    parser.add_argument('--seed-mode', dest='seed_mode', choices=SEED_MODES, help='decoder seed at inference')
    parser.add_argument('--out', type=str, help='output directory')


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawTextHelpFormatter)
    subparsers = parser.add_subparsers(dest='command', required=True)

    synth = subparsers.add_parser('synth', help='generate a synthetic dataset')
    synth.add_argument('--spec', type=str, default=str(DEFAULT_SCENE_SPEC), help='scene spec JSON')
    synth.add_argument('--out', type=str, required=True, help='output clip directory')
    synth.add_argument('--seed', type=int, help='overrides the seed of the scene spec')

    train = subparsers.add_parser('train', help='train a box encoder-decoder')
    _add_data_arguments(train)
    train.add_argument('--type', choices=(LIP_LSTM_METHOD, L_LSTM_METHOD), help='model variant')
    train.add_argument('--deploy', type=str, help='output directory for checkpoints and logs')
    train.add_argument('--epochs', type=int)
    train.add_argument('--batch-size', dest='batch_size', type=int)
    train.add_argument('--lr', dest='learning_rate', type=float)
    train.add_argument('--hidden', type=int)
    train.add_argument('--teacher-force-rate', dest='teacher_force_rate', type=float)
    train.add_argument('--valid-fraction', dest='valid_fraction', type=float)
    train.add_argument('--limit-samples', dest='limit_samples', type=int)

    _add_eval_arguments(subparsers.add_parser('eval', help='evaluate methods on the test split'))
    _add_eval_arguments(subparsers.add_parser('predict', help='write per-window predictions'))

    plot = subparsers.add_parser('plot', help='render prediction overlays')
    _add_data_arguments(plot)
    plot.add_argument('--predictions', type=str, required=True, help='predictions JSON-lines file')
    plot.add_argument('--out', type=str, required=True, help='image output directory')
    plot.add_argument('--sample-id', dest='sample_ids', action='append', help='sample to plot (repeatable)')
    plot.add_argument('--limit', type=int, help='plot at most this many samples')

    gradcheck = subparsers.add_parser('gradcheck', help='check analytic gradients of a reduced network')
    gradcheck.add_argument('--seed', type=int, default=0)
    gradcheck.add_argument('--threshold', type=float, default=GRADCHECK_THRESHOLD)
    gradcheck.add_argument('--step', type=float, default=1e-5, help='finite-difference step')
    gradcheck.add_argument('--corrupt', type=str, help='sign-flip the analytic gradient of this parameter')

    benchmark = subparsers.add_parser('benchmark', help='seed-averaged comparison of all methods')
    benchmark.add_argument('--spec', type=str, default=str(BENCHMARK_SCENE_SPEC), help='scene spec JSON')
    benchmark.add_argument('--configs', nargs='+', default=[str(p) for p in BENCHMARK_TRAIN_CONFIGS],
                           help='training configuration files, one per learned model')
    benchmark.add_argument('--seeds', nargs='+', type=int, default=[0, 1, 2])
    benchmark.add_argument('--out', type=str, required=True, help='output directory')
    benchmark.add_argument('--epochs', type=int)
    benchmark.add_argument('--hidden', type=int)

    return parser.parse_args(argv)


def _configs(args):
    overrides = {'random_seed': args.seed,
                 'dataset': {'path': args.data_path, 'stride': args.stride, 'direction': args.direction}}
    if args.command == 'train':
        overrides['type'] = args.type
        overrides['deploy'] = {'path': args.deploy}
        overrides['model'] = {'hidden': args.hidden}
        overrides['train'] = {'epochs': args.epochs, 'batch_size': args.batch_size,
                              'learning_rate': args.learning_rate, 'teacher_force_rate': args.teacher_force_rate,
                              'valid_fraction': args.valid_fraction}
        overrides['dataset']['limit_samples'] = args.limit_samples
    if args.command in ('eval', 'predict'):
        overrides['eval'] = {'seed_mode': args.seed_mode}

    return resolve_configs(args.configs_path, overrides)


def _checkpoints(args):
    checkpoints = {}
    if args.lip_lstm:
        checkpoints[LIP_LSTM_METHOD] = args.lip_lstm
    if args.l_lstm:
        checkpoints[L_LSTM_METHOD] = args.l_lstm
    return checkpoints


def run(args) -> int:
    if args.command == 'synth':
        set_logging_config(None)
        table = cmd_synth(load_scene_spec(args.spec), args.out, args.seed)
        print(table)
        return 0

    if args.command == 'gradcheck':
        set_logging_config(None)
        _, passed = cmd_gradcheck(args.seed, h=args.step, threshold=args.threshold, corrupt_param=args.corrupt)
        return 0 if passed else 1

    if args.command == 'benchmark':
        set_logging_config(args.out)
        overrides = {'model': {'hidden': args.hidden}, 'train': {'epochs': args.epochs}}
        train_configs = [resolve_configs(path, overrides) for path in args.configs]
        table, violations = cmd_benchmark(load_scene_spec(args.spec), train_configs, args.seeds, args.out)
        print(table)
        return 0 if not violations else 1

    configs = _configs(args)
    if args.command == 'train':
        cmd_train(configs)
        return 0

    out_dir = Path(args.out) if args.out else Path(configs['deploy']['path']) / args.command
    set_logging_config(out_dir)
    if args.command == 'eval':
        evaluator = cmd_eval(configs, args.methods, out_dir, _checkpoints(args), configs['eval']['seed_mode'])
        print(evaluator.summary())
    elif args.command == 'predict':
        cmd_predict(configs, args.methods, out_dir, _checkpoints(args), configs['eval']['seed_mode'])
    elif args.command == 'plot':
        cmd_plot(configs, args.predictions, out_dir, args.sample_ids, args.limit)

    return 0


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return run(args)
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return 1


if __name__ == '__main__':
    sys.exit(main())
