"""Pure-numpy implementation of the minimal-cover amplitude kernel.

Hot path of Hurst estimation; a Cython twin (`_cover_cy`) with identical
semantics is preferred at import time when the extension was compiled.
"""
import numpy as np


def cover_amplitudes(x, window_sizes):
    """Total cover amplitude per window size.

    For each window size d the series is cut into complete consecutive
    windows spanning d increments each, and the window amplitude is the
    max minus min of the three dyadic samples {left edge, midpoint, right
    edge}. Sampling windows at fixed relative positions keeps the
    discretization deficit identical across scales, which is what makes
    the log-log slope an unbiased scaling estimate.

    Returns (sums, counts): per window size, the summed amplitudes over
    complete windows and the number of complete windows.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    d_arr = np.asarray(window_sizes, dtype=np.int64)
    n_incr = x.size - 1
    sums = np.zeros(d_arr.size, dtype=np.float64)
    counts = np.zeros(d_arr.size, dtype=np.int64)
    for k, d in enumerate(d_arr):
        d = int(d)
        nf = n_incr // d
        counts[k] = nf
        if nf == 0:
            continue
        left = x[0 : nf * d : d]
        mid = x[d // 2 : nf * d : d]
        right = x[d : nf * d + 1 : d]
        hi = np.maximum(np.maximum(left, mid), right)
        lo = np.minimum(np.minimum(left, mid), right)
        sums[k] = float(np.sum(hi - lo))
    return sums, counts
