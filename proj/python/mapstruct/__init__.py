"""Structure scoring, clutter removal and wall extraction for occupancy maps.

Maps are 2-D numpy arrays indexed [row, column]; any non-zero cell is occupied.
Reports are returned as dictionaries with the same layout as the CLI's JSON.
"""

import json

import numpy as np

from . import _core
from ._core import Error

__all__ = [
    "Error",
    "analyze",
    "declutter",
    "walls",
    "inject",
    "sweep",
    "correlate",
    "builtin_map",
    "shuffle_cells",
    "load_map",
    "save_map",
]

_CONFIG_KEYS = ("angle_bins", "radius_bins", "prominence", "prominence_mode", "mask_half_width")


def _check_config(config):
    unknown = set(config) - set(_CONFIG_KEYS)
    if unknown:
        raise TypeError(f"unknown option(s): {', '.join(sorted(unknown))}")


def analyze(grid, **config):
    """Dominant directions and global score of a map."""
    _check_config(config)
    return json.loads(_core.analyze(grid, **config))


def declutter(grid, threshold=None, **config):
    """Returns (report, decluttered map, normalized score field or None)."""
    _check_config(config)
    report, kept, scores = _core.declutter(grid, threshold=threshold, **config)
    return json.loads(report), kept, scores


def walls(grid, filter=True, ground_truth=None, **options):
    """Wall lines of a map, evaluated against ground_truth when given.

    ground_truth is a list of {"angle_deg", "offset_cells"} or
    {"x1", "y1", "x2", "y2"} entries, or a dict holding such a list under "lines".
    """
    gt = None if ground_truth is None else json.dumps(ground_truth)
    _check_config({k: v for k, v in options.items() if k in _CONFIG_KEYS})
    return json.loads(_core.walls(grid, filter=filter, ground_truth=gt, **options))


def inject(grid, shape="square", count=20, size=5, seed=0):
    """Returns (cluttered map, labels) with labels 0 free, 1 structure, 2 clutter."""
    return _core.inject(grid, shape=shape, count=count, size=size, seed=seed)


def sweep(maps, shapes=("square", "rectangle", "random"), sizes=(2, 6, 10, 14, 18, 22, 26, 30, 34, 38),
          counts=(20, 50, 80, 120, 160), seeds=(1, 2, 3)):
    """Runs the clutter sweep. maps is a dict of name -> array.

    Returns (rows, csv_text).
    """
    report, csv = _core.sweep(list(maps.items()), list(shapes), list(sizes), list(counts), list(seeds))
    return json.loads(report)["rows"], csv


def correlate(csv_text):
    """Pearson correlation between w and precision over sweep rows in CSV form."""
    return json.loads(_core.correlate(csv_text))


def builtin_map(name, size=200):
    """Returns (map, ground truth dict) for office, apartment30 or multiangle."""
    grid, gt = _core.builtin_map(name, size)
    return grid, json.loads(gt)


def shuffle_cells(grid, seed):
    return _core.shuffle_cells(grid, seed)


def load_map(path, meta=None, occupied_threshold=None):
    """Loads a PGM or PNG map and binarizes it."""
    return _core.load_map(str(path), None if meta is None else str(meta), occupied_threshold)


def save_map(grid, path):
    _core.save_map(np.asarray(grid), str(path))
