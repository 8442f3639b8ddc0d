"""Partitioned enumeration over index ranges.

A task is any callable (start, stop) -> integer numpy array.  The range is
cut into contiguous pieces, each piece is evaluated (in forked worker
processes when workers > 1) and the integer results are summed.  Integer
addition is associative, so the result is bit-identical for every
partitioning.
"""

import multiprocessing as mp

import numpy as np

_TASK = [None]


def _run_piece(bounds):
    return _TASK[0](*bounds)


def split(total, parts):
    edges = np.linspace(0, total, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def summed(task, total, workers=1, pieces=None):
    pieces = split(total, pieces or max(workers, 1))
    if workers <= 1 or len(pieces) == 1:
        results = [task(a, b) for a, b in pieces]
    else:
        _TASK[0] = task
        try:
            with mp.get_context("fork").Pool(workers) as pool:
                results = pool.map(_run_piece, pieces)
        finally:
            _TASK[0] = None
    out = results[0].copy()
    for r in results[1:]:
        out += r
    return out
