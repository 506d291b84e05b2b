import json

import numpy as np

from configs.constants import ACROSS, AWAY, DIRECTIONS, LAST_OBSERVED, LR_METHOD, STATS_METHOD, STILL
from data_manager.schema import PredictionSet
from evaluator.report import eval_report, relative_changes, render_report, report_records
from trainer.metrics import DEFAULT_OFFSETS


def _sets(rng, count):
    sets = []
    for _ in range(count):
        x1, y1 = rng.uniform(0., 300., 9), rng.uniform(0., 150., 9)
        sets.append(PredictionSet(np.stack([x1, y1, x1 + 40., y1 + 90.], axis=1), DEFAULT_OFFSETS))
    return sets


def test_aggregate_is_the_count_weighted_mean():
    rng = np.random.default_rng(0)
    preds, truths = _sets(rng, 12), _sets(rng, 12)
    directions = [AWAY] * 7 + [ACROSS] * 3 + [STILL] * 2

    report = eval_report(preds, truths, directions)

    assert report.count == 12
    assert [report.per_direction[d].count for d in DIRECTIONS] == [0, 7, 3, 2]
    assert np.isnan(report.per_direction['toward'].mean_iou)
    for metric in ('mean_iou', 'mean_final_iou', 'mean_de'):
        weighted = sum(getattr(report.per_direction[d], metric) * report.per_direction[d].count
                       for d in (AWAY, ACROSS, STILL)) / 12
        assert abs(getattr(report, metric) - weighted) < 1e-9


def test_single_direction():
    rng = np.random.default_rng(1)
    preds, truths = _sets(rng, 4), _sets(rng, 4)

    report = eval_report(preds, truths, [AWAY] * 4)

    assert report.values() == report.per_direction[AWAY].values()


def test_render_report_names_the_setup():
    rng = np.random.default_rng(2)
    truths = _sets(rng, 4)
    directions = [AWAY, AWAY, STILL, ACROSS]
    reports = {LR_METHOD: eval_report(_sets(rng, 4), truths, directions),
               STATS_METHOD: eval_report(_sets(rng, 4), truths, directions)}

    text = render_report(reports, seed_mode=LAST_OBSERVED, oracle_direction=True)

    assert 'pixels of the 455x256 frame' in text
    assert 'last_observed' in text
    assert 'ground-truth walking direction' in text
    assert text.index('STATS') < text.index('LR')
    assert 'Relative change' in text
    assert relative_changes(reports)[0]['method'] == LR_METHOD


def test_report_records():
    rng = np.random.default_rng(3)
    truths = _sets(rng, 2)
    reports = {LR_METHOD: eval_report(truths, truths, [AWAY, STILL])}

    records = [json.loads(line) for line in report_records(reports, seed_mode=LAST_OBSERVED)]

    assert [r['direction'] for r in records] == ['all'] + list(DIRECTIONS)
    assert records[0]['mean_iou'] == 1. and records[0]['mean_de'] == 0.
    assert records[1]['mean_iou'] is None
    assert records[1]['count'] == 0
