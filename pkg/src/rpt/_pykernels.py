"""Pure-Python/numpy implementations of the hot loops in ``_ckernels``."""

from __future__ import annotations

from typing import Optional

import numpy as np

BACKEND = "python"


def count_hits(postings: list[np.ndarray], n_docs: int) -> np.ndarray:
    if not postings:
        return np.zeros(n_docs, dtype=np.int32)
    return np.bincount(np.concatenate(postings), minlength=n_docs).astype(np.int32)


def cosine_rows(
    q_ids: np.ndarray,
    q_vals: np.ndarray,
    indptr: np.ndarray,
    ids: np.ndarray,
    vals: np.ndarray,
    sq_norms: np.ndarray,
    n_types: int,
    rows: Optional[np.ndarray] = None,
) -> np.ndarray:
    dense = np.zeros(n_types, dtype=np.float64)
    ok = (q_ids >= 0) & (q_ids < n_types)
    dense[q_ids[ok]] = q_vals[ok]
    qn = float(np.dot(q_vals, q_vals))
    if rows is None:
        starts, ends = indptr[:-1], indptr[1:]
        entry_idx = None
        row_norms = sq_norms
    else:
        starts, ends = indptr[rows], indptr[rows + 1]
        row_norms = sq_norms[rows]
    lengths = ends - starts
    n_out = len(lengths)
    if n_out == 0:
        return np.zeros(0, dtype=np.float64)
    if rows is not None:
        # flat positions of every entry of the selected rows
        offsets = np.cumsum(lengths) - lengths
        entry_idx = np.arange(int(lengths.sum())) - np.repeat(offsets - starts, lengths)
    prod = dense[ids] * vals if entry_idx is None else dense[ids[entry_idx]] * vals[entry_idx]
    seg_starts = np.cumsum(lengths) - lengths
    dots = np.zeros(n_out, dtype=np.float64)
    nonempty = lengths > 0
    if prod.size:
        dots[nonempty] = np.add.reduceat(prod, seg_starts[nonempty])
    denom = np.sqrt(qn * row_norms)
    out = np.zeros(n_out, dtype=np.float64)
    pos = denom > 0
    out[pos] = np.minimum(dots[pos] / denom[pos], 1.0)
    return out
