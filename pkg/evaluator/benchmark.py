"""Seed-averaged comparison of every method on synthetic benchmark scenes."""
import json
from collections import OrderedDict
from typing import Dict, List, Sequence

import numpy as np
from prettytable import PrettyTable

from configs.constants import L_LSTM_METHOD, LIP_LSTM_METHOD, LR_METHOD, METHOD_TITLES, STATS_METHOD
from evaluator.report import EvalReport, ordered_methods
from exceptions import ContractError

# LIP-LSTM must beat the location-only model by at least this factor on Mean DE
POSE_IMU_GAIN = 0.95


def average_mean_de(runs: Sequence[Dict[str, EvalReport]]) -> 'OrderedDict[str, float]':
    if not runs:
        raise ContractError('benchmark needs at least one run')
    methods = ordered_methods(runs[0])
    if any(set(run) != set(methods) for run in runs):
        raise ContractError('every benchmark run must report the same methods')

    return OrderedDict((m, float(np.mean([run[m].mean_de for run in runs]))) for m in methods)


def ordering_violations(mean_de: Dict[str, float], gain: float = POSE_IMU_GAIN) -> List[str]:
    """Broken ranking claims on seed-averaged Mean DE; empty when the ranking holds."""
    violations = []
    for learned in [m for m in (L_LSTM_METHOD, LIP_LSTM_METHOD) if m in mean_de]:
        for baseline in (STATS_METHOD, LR_METHOD):
            if baseline in mean_de and not mean_de[learned] < mean_de[baseline]:
                violations.append('{} mean DE {:.2f} is not below {} mean DE {:.2f}'.format(
                    METHOD_TITLES[learned], mean_de[learned], METHOD_TITLES[baseline], mean_de[baseline]))
    if L_LSTM_METHOD not in mean_de or LIP_LSTM_METHOD not in mean_de:
        return violations
    if not mean_de[LIP_LSTM_METHOD] <= gain * mean_de[L_LSTM_METHOD]:
        violations.append('LIP-LSTM mean DE {:.2f} exceeds {} x L-LSTM mean DE {:.2f}'.format(
            mean_de[LIP_LSTM_METHOD], gain, mean_de[L_LSTM_METHOD]))

    return violations


def benchmark_table(seeds: Sequence[int], runs: Sequence[Dict[str, EvalReport]]) -> PrettyTable:
    mean_de = average_mean_de(runs)
    table = PrettyTable(['Method'] + ['DE seed {}'.format(s) for s in seeds] + ['Mean DE'])
    for method, value in mean_de.items():
        table.add_row([METHOD_TITLES.get(method, method)] + ['{:.1f}'.format(run[method].mean_de) for run in runs]
                      + ['{:.1f}'.format(value)])

    return table


def benchmark_records(seeds: Sequence[int], runs: Sequence[Dict[str, EvalReport]]) -> List[str]:
    records = []
    for method, value in average_mean_de(runs).items():
        record = OrderedDict([('method', method),
                              ('seeds', list(seeds)),
                              ('mean_de_per_seed', [run[method].mean_de for run in runs]),
                              ('mean_de', value)])
        records.append(json.dumps(record))

    return records
