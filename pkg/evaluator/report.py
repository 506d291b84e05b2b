import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from prettytable import PrettyTable

from configs.constants import DIRECTIONS, FRAME_HEIGHT, FRAME_WIDTH, METHOD_ORDER, METHOD_TITLES
from data_manager.schema import PredictionSet
from exceptions import ContractError
from trainer.metrics import DEFAULT_OFFSETS, mean_de, mean_final_iou, mean_iou

COORDINATE_SPACE = 'pixels of the {}x{} frame'.format(FRAME_WIDTH, FRAME_HEIGHT)
METRIC_COLUMNS = ('Mean IOU', 'Mean Final IOU', 'Mean DE')


@dataclass
class EvalReport:
    mean_iou: float
    mean_final_iou: float
    mean_de: float
    count: int
    per_direction: Dict[str, 'EvalReport'] = field(default_factory=OrderedDict)

    def values(self):
        return self.mean_iou, self.mean_final_iou, self.mean_de

    def to_record(self) -> Dict:
        return {'mean_iou': _finite_or_none(self.mean_iou),
                'mean_final_iou': _finite_or_none(self.mean_final_iou),
                'mean_de': _finite_or_none(self.mean_de),
                'count': self.count}


def eval_report(preds: Sequence[PredictionSet], truths: Sequence[PredictionSet], directions: Sequence[str],
                offsets=DEFAULT_OFFSETS) -> EvalReport:
    if len(directions) != len(preds):
        raise ContractError('{} direction labels for {} predictions'.format(len(directions), len(preds)))

    report = _cell(preds, truths, offsets)
    for direction in DIRECTIONS:
        index = [n for n, d in enumerate(directions) if d == direction]
        report.per_direction[direction] = _cell([preds[n] for n in index], [truths[n] for n in index], offsets)

    return report


def _cell(preds, truths, offsets) -> EvalReport:
    return EvalReport(mean_iou(preds, truths, offsets),
                      mean_final_iou(preds, truths, offsets),
                      mean_de(preds, truths, offsets),
                      len(preds))


def ordered_methods(reports: Dict[str, EvalReport]) -> List[str]:
    known = [m for m in METHOD_ORDER if m in reports]
    return [m for m in reports if m not in known] + known


def overall_table(reports: Dict[str, EvalReport]) -> PrettyTable:
    table = PrettyTable(['Method'] + list(METRIC_COLUMNS) + ['Samples'])
    for method in ordered_methods(reports):
        report = reports[method]
        table.add_row([METHOD_TITLES.get(method, method)] + [_fmt(v, i) for i, v in enumerate(report.values())]
                      + [report.count])

    return table


def direction_table(reports: Dict[str, EvalReport]) -> PrettyTable:
    header = ['Method']
    for direction in DIRECTIONS:
        header += ['{} {}'.format(direction.capitalize(), column) for column in METRIC_COLUMNS]
    table = PrettyTable(header)
    for method in ordered_methods(reports):
        row = [METHOD_TITLES.get(method, method)]
        for direction in DIRECTIONS:
            cell = reports[method].per_direction[direction]
            row += [_fmt(v, i) for i, v in enumerate(cell.values())]
        table.add_row(row)

    return table


def relative_changes(reports: Dict[str, EvalReport]) -> List[Dict]:
    """Relative change of each row against the row above it, in report order."""
    changes = []
    methods = ordered_methods(reports)
    for previous, current in zip(methods, methods[1:]):
        before, after = reports[previous], reports[current]
        changes.append({'method': current,
                        'baseline': previous,
                        'mean_final_iou_increase': _ratio(after.mean_final_iou - before.mean_final_iou,
                                                          before.mean_final_iou),
                        'mean_de_reduction': _ratio(before.mean_de - after.mean_de, before.mean_de)})

    return changes


def render_report(reports: Dict[str, EvalReport], seed_mode: Optional[str] = None,
                  oracle_direction: bool = False, offsets=DEFAULT_OFFSETS) -> str:
    lines = ['Coordinate space: {}; offsets +{} ... +{}'.format(COORDINATE_SPACE, offsets[0], offsets[-1])]
    if seed_mode is not None:
        lines.append('Decoder seed mode: {}'.format(seed_mode))
    if oracle_direction:
        lines.append('STATS uses the ground-truth walking direction of each test sample')
    lines += ['', 'Overall results', overall_table(reports).get_string(),
              '', 'Results on each walking direction', direction_table(reports).get_string()]

    changes = relative_changes(reports)
    if changes:
        lines += ['', 'Relative change against the previous row']
        table = PrettyTable(['Method', 'vs', 'Mean Final IOU increase', 'Mean DE reduction'])
        for change in changes:
            table.add_row([METHOD_TITLES.get(change['method'], change['method']),
                           METHOD_TITLES.get(change['baseline'], change['baseline']),
                           _percent(change['mean_final_iou_increase']), _percent(change['mean_de_reduction'])])
        lines.append(table.get_string())

    return '\n'.join(lines) + '\n'


def report_records(reports: Dict[str, EvalReport], seed_mode: Optional[str] = None) -> List[str]:
    records = []
    for method in ordered_methods(reports):
        report = reports[method]
        cells = [('all', report)] + list(report.per_direction.items())
        for direction, cell in cells:
            record = OrderedDict([('method', method), ('direction', direction), ('seed_mode', seed_mode),
                                  ('coordinate_space', COORDINATE_SPACE)])
            record.update(cell.to_record())
            records.append(json.dumps(record))

    return records


def _fmt(value, column):
    if value is None or math.isnan(value):
        return '-'
    return '{:.1f}'.format(value) if column == 2 else '{:.3f}'.format(value)


def _finite_or_none(value):
    return None if value is None or math.isnan(value) else value


def _ratio(numerator, denominator):
    if denominator is None or math.isnan(denominator) or denominator == 0. or math.isnan(numerator):
        return None
    return numerator / denominator


def _percent(value):
    return '-' if value is None else '{:.1f}%'.format(100. * value)
