import copy
import logging
import json
import os
import sys
from pathlib import Path

from typing import Dict

from configs.constants import DATA_ROOT_ENV, DEFAULT_CONFIGS, DEFAULT_DATA_ROOT, RUN_CONFIG_FILENAME


def load_json(path):
    with open(path) as json_file:
        json_obj = json.load(json_file)

    return json_obj


def save_json(obj, path, indent=4):
    make_dir_if_not_exist(Path(path).parent)
    with open(path, 'w') as json_file:
        json.dump(obj, json_file, indent=indent, sort_keys=True)


def make_dir_if_not_exist(dir_path):
    if not os.path.exists(dir_path):
        os.makedirs(dir_path)


def merge_configs(base: Dict, override: Dict) -> Dict:
    """Deep-merge ``override`` into a copy of ``base``; ``None`` values in override are ignored."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_configs(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)

    return merged


def resolve_configs(configs_path=None, overrides: Dict = None) -> Dict:
    configs = copy.deepcopy(DEFAULT_CONFIGS)
    if configs_path is not None:
        configs = merge_configs(configs, load_json(configs_path))
    configs = merge_configs(configs, overrides)

    if configs['dataset'].get('path') is None:
        configs['dataset']['path'] = os.environ.get(DATA_ROOT_ENV, DEFAULT_DATA_ROOT)

    return configs


def archive_configs(configs: Dict, out_dir) -> Path:
    path = Path(out_dir) / RUN_CONFIG_FILENAME
    save_json(configs, path)

    return path


def set_logging_config(log_path, filename='run.log'):
    stdout_handler = logging.StreamHandler(sys.stdout)

    logging_handlers = [stdout_handler]
    logging_level = logging.INFO

    if log_path is not None:
        log_path = os.path.join(log_path, filename)
        os.makedirs(os.path.dirname(log_path), exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        logging_handlers.append(file_handler)

    logging.basicConfig(
        format="%(asctime)s (%(filename)s:%(lineno)d): [%(levelname)s] - %(message)s",
        handlers=logging_handlers,
        level=logging_level,
        force=True,
    )
