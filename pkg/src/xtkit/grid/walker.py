"""Apply several functors to the entities and intersections of a view in one pass."""

import os
import threading
from concurrent.futures import ThreadPoolExecutor

from xtkit.common.exceptions import UsageError
from xtkit.grid.boundaryinfo import DirichletBoundary, NeumannBoundary
from xtkit.grid.view import HIGH


class Codim0Functor:
    """Functor called on cells: ``prepare``, ``apply_local(entity)``, ``finalize``."""

    def prepare(self):
        pass

    def apply_local(self, entity):
        raise NotImplementedError

    def finalize(self):
        pass


class Codim1Functor:
    """Functor called on intersections with their inside and (optional) outside cell."""

    def prepare(self):
        pass

    def apply_local(self, intersection, inside, outside):
        raise NotImplementedError

    def finalize(self):
        pass


class Codim0And1Functor:

    def prepare(self):
        pass

    def apply_local(self, entity):
        raise NotImplementedError

    def apply_local_intersection(self, intersection, inside, outside):
        raise NotImplementedError

    def finalize(self):
        pass


class Codim0Lambda(Codim0Functor):

    def __init__(self, fn, prepare=None, finalize=None):
        self._fn, self._prepare, self._finalize = fn, prepare, finalize

    def prepare(self):
        if self._prepare:
            self._prepare()

    def apply_local(self, entity):
        self._fn(entity)

    def finalize(self):
        if self._finalize:
            self._finalize()


class Codim1Lambda(Codim1Functor):

    def __init__(self, fn, prepare=None, finalize=None):
        self._fn, self._prepare, self._finalize = fn, prepare, finalize

    def prepare(self):
        if self._prepare:
            self._prepare()

    def apply_local(self, intersection, inside, outside):
        self._fn(intersection, inside, outside)

    def finalize(self):
        if self._finalize:
            self._finalize()


# --- filters ---

class EntityFilter:
    def __call__(self, view, entity):
        raise NotImplementedError


class IntersectionFilter:
    def __call__(self, view, intersection):
        raise NotImplementedError


class AllEntities(EntityFilter):
    def __call__(self, view, entity):
        return True


class AllIntersections(IntersectionFilter):
    def __call__(self, view, intersection):
        return True


class InnerIntersections(IntersectionFilter):
    def __call__(self, view, intersection):
        return intersection.neighbor()


class InnerIntersectionsPrimally(IntersectionFilter):
    """Each inner face once: from the inside cell with the smaller index, wrap faces from the high side."""

    def __call__(self, view, intersection):
        if not intersection.neighbor():
            return False
        if intersection.periodic:
            return intersection.side == HIGH
        return view.index(intersection.inside) < view.index(intersection.outside)


class BoundaryIntersections(IntersectionFilter):
    def __call__(self, view, intersection):
        return intersection.boundary()


class DirichletIntersections(IntersectionFilter):
    def __init__(self, boundary_info):
        self.boundary_info = boundary_info

    def __call__(self, view, intersection):
        return intersection.boundary() and self.boundary_info.type(intersection) == DirichletBoundary


class NeumannIntersections(IntersectionFilter):
    def __init__(self, boundary_info):
        self.boundary_info = boundary_info

    def __call__(self, view, intersection):
        return intersection.boundary() and self.boundary_info.type(intersection) == NeumannBoundary


class ApplyOn:
    AllEntities = AllEntities
    AllIntersections = AllIntersections
    InnerIntersections = InnerIntersections
    InnerIntersectionsPrimally = InnerIntersectionsPrimally
    BoundaryIntersections = BoundaryIntersections
    DirichletIntersections = DirichletIntersections
    NeumannIntersections = NeumannIntersections


def _default_threads():
    return max(1, min(4, os.cpu_count() or 1))


class Walker:
    """Walk a grid view once, applying all added functors.

    ``prepare`` of every functor is called before and ``finalize`` after the
    walk, both on the calling thread.  In parallel walks, the cells are
    split into contiguous chunks that are processed by a thread pool, so
    ``apply_local`` has to be reentrant.
    """

    def __init__(self, view):
        self.view = view
        self._codim0 = []
        self._codim1 = []
        self._functors = []

    def add(self, functor, filter=None, intersection_filter=None):
        """Add ``functor``, restricted to the items selected by ``filter``.

        Plain callables are wrapped as codim 0 functors, or codim 1 functors
        if ``filter`` is an :class:`IntersectionFilter`.  For
        :class:`Codim0And1Functor` objects, ``filter`` selects cells and
        ``intersection_filter`` intersections.
        """
        if isinstance(functor, Codim0And1Functor):
            filter = filter or AllEntities()
            intersection_filter = intersection_filter or AllIntersections()
            self._check(filter, EntityFilter)
            self._check(intersection_filter, IntersectionFilter)
            self._codim0.append((functor.apply_local, filter))
            self._codim1.append((functor.apply_local_intersection, intersection_filter))
        else:
            if intersection_filter is not None:
                raise UsageError('intersection_filter is only supported for Codim0And1Functor')
            if not isinstance(functor, (Codim0Functor, Codim1Functor)):
                if not callable(functor):
                    raise UsageError(f'{functor!r} is not a functor')
                functor = (Codim1Lambda if isinstance(filter, IntersectionFilter) else Codim0Lambda)(functor)
            if isinstance(functor, Codim0Functor):
                filter = filter or AllEntities()
                self._check(filter, EntityFilter)
                self._codim0.append((functor.apply_local, filter))
            else:
                filter = filter or AllIntersections()
                self._check(filter, IntersectionFilter)
                self._codim1.append((functor.apply_local, filter))
        self._functors.append(functor)
        return self

    @staticmethod
    def _check(filter, expected):
        if not isinstance(filter, expected):
            raise UsageError(f'{type(filter).__name__} cannot be used here, expected a {expected.__name__}')

    def clear(self):
        self._codim0, self._codim1, self._functors = [], [], []

    def _walk_cells(self, cells, abort=None):
        view = self.view
        for cell in cells:
            if abort is not None and abort.is_set():
                return
            for apply, filter in self._codim0:
                if filter(view, cell):
                    apply(cell)
            if self._codim1:
                for intersection in view.intersections(cell):
                    for apply, filter in self._codim1:
                        if filter(view, intersection):
                            apply(intersection, intersection.inside, intersection.outside)

    def walk(self, parallel=False, num_threads=None):
        for functor in self._functors:
            functor.prepare()
        cells = list(self.view.cells())
        if parallel and len(cells) > 1:
            num_threads = num_threads or _default_threads()
            chunk = -(-len(cells) // num_threads)
            chunks = [cells[i:i + chunk] for i in range(0, len(cells), chunk)]
            abort = threading.Event()

            def work(part):
                try:
                    self._walk_cells(part, abort)
                except BaseException:
                    abort.set()
                    raise

            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                futures = [pool.submit(work, part) for part in chunks]
            for future in futures:
                future.result()
        else:
            self._walk_cells(cells)
        for functor in self._functors:
            functor.finalize()
