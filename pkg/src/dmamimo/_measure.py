import numpy as np


def crossing_width(x, y, peak, level):
    """Width of the contiguous region around ``peak`` where ``y >= level``.

    Edges are located by linear interpolation between the last sample above
    ``level`` and the first sample below it. A region that runs off the end of
    the grid is truncated at the grid boundary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)

    lo = peak
    while lo > 0 and y[lo - 1] >= level:
        lo -= 1
    if lo == 0:
        left = x[0]
    else:
        x0, x1, y0, y1 = x[lo - 1], x[lo], y[lo - 1], y[lo]
        left = x0 + (level - y0) * (x1 - x0) / (y1 - y0)

    hi = peak
    while hi < n - 1 and y[hi + 1] >= level:
        hi += 1
    if hi == n - 1:
        right = x[-1]
    else:
        x0, x1, y0, y1 = x[hi], x[hi + 1], y[hi], y[hi + 1]
        right = x0 + (level - y0) * (x1 - x0) / (y1 - y0)

    return float(right - left)
