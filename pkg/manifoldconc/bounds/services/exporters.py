"""Bound curve export."""
import csv
import logging
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)


def provenance_header(manifest_hash, provenance):
    """First line of every CSV output."""
    return f'# manifest={manifest_hash or "none"} provenance={provenance}\n'


def format_number(value):
    if value is None:
        return ''
    return format(float(value), '.12g')


def curve_rows(bound, grid):
    values = bound.evaluate(grid)
    yield ['t', 'bound']
    for t, value in zip(np.asarray(grid, dtype=float), values):
        yield [format_number(t), format_number(value)]


def export_curve_csv(path, bound, grid, manifest_hash=''):
    """Write (t, bound) pairs for plotting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as handle:
        handle.write(provenance_header(manifest_hash, bound.provenance))
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerows(curve_rows(bound, grid))
    logger.debug('Wrote %d curve points to %s', len(grid), path)
    return path
