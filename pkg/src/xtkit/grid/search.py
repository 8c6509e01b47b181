"""Point location on structured grid views."""

import math

from xtkit.grid.view import TensorEntity


class EntityInlevelSearch:
    """Find the cells containing a sequence of points.

    Cell ``i`` in a direction covers ``[x_i, x_{i+1})``, except the last one,
    which also contains the upper boundary.  Points outside the domain map to
    ``None``.  The cell of the last successful query is remembered and tried
    first, so sequences of nearby points are located without recomputing.
    """

    def __init__(self, view):
        self.view = view
        self._last = None
        self.cursor_hits = 0

    def _contains(self, coords, x):
        view = self.view
        for i, c in enumerate(coords):
            lo = view.node(i, c)
            hi = view.node(i, c + 1)
            last = c == view.num_elements[i] - 1
            if not (lo <= x[i] < hi or (last and x[i] == hi)):
                return False
        return True

    def _locate(self, x):
        view = self.view
        coords = []
        for i in range(view.dim):
            n = view.num_elements[i]
            if not view.node(i, 0) <= x[i] <= view.node(i, n):
                return None
            c = min(n - 1, max(0, math.floor((x[i] - view.lower_left[i]) / view.widths[i])))
            # floor() may be off by one next to nodes
            while c > 0 and x[i] < view.node(i, c):
                c -= 1
            while c < n - 1 and x[i] >= view.node(i, c + 1):
                c += 1
            coords.append(c)
        return tuple(coords)

    def find_one(self, point):
        x = [float(v) for v in point]
        if len(x) != self.view.dim:
            raise ValueError(f'expected a point of dimension {self.view.dim}, got {len(x)}')
        if self._last is not None and self._contains(self._last, x):
            self.cursor_hits += 1
            coords = self._last
        else:
            coords = self._locate(x)
            if coords is None:
                return None
            self._last = coords
        return TensorEntity((), coords, self.view.level)

    def find(self, points):
        return [self.find_one(p) for p in points]

    __call__ = find


def entity_search(view):
    return EntityInlevelSearch(view)
