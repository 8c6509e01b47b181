"""Named wall/user/system timers with CSV export.

Sections are identified by dotted names (``"sec.inner"``).  A process-wide
registry is available via :func:`timings`::

    timings().start('sec')
    with scoped_timing('sec.inner'):
        ...
    timings().stop('sec')
    timings().output_all_measures(sys.stdout)
"""

import os
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from xtkit.common.exceptions import UsageError


def _stamp():
    t = os.times()
    return time.perf_counter_ns(), t.user, t.system


@dataclass
class TimingSection:
    name: str
    wall_us: int = 0
    user_us: int = 0
    sys_us: int = 0
    running: bool = False
    start_stamp: tuple = field(default=None, repr=False)


class Timings:
    """Registry of :class:`TimingSection` objects, safe for concurrent use."""

    def __init__(self, threads=1, clock=_stamp):
        self.threads = threads
        self._clock = clock
        self._sections = {}
        self._lock = threading.Lock()

    def start(self, name):
        with self._lock:
            section = self._sections.setdefault(name, TimingSection(name))
            if section.running:
                raise UsageError(f"timing section '{name}' is already running")
            section.running = True
            section.start_stamp = self._clock()

    def stop(self, name):
        stamp = self._clock()
        with self._lock:
            section = self._sections.get(name)
            if section is None or not section.running:
                raise UsageError(f"timing section '{name}' is not running")
            wall0, user0, sys0 = section.start_stamp
            section.wall_us += max(0, (stamp[0] - wall0) // 1000)
            section.user_us += max(0, round((stamp[1] - user0) * 1e6))
            section.sys_us += max(0, round((stamp[2] - sys0) * 1e6))
            section.running = False
            section.start_stamp = None

    @contextmanager
    def scoped(self, name):
        self.start(name)
        try:
            yield
        finally:
            self.stop(name)

    def section(self, name):
        with self._lock:
            s = self._sections[name]
            return TimingSection(s.name, s.wall_us, s.user_us, s.sys_us, s.running)

    def sections(self):
        with self._lock:
            return list(self._sections)

    def reset(self):
        with self._lock:
            self._sections.clear()

    def output_all_measures(self, sink=None):
        """Return (and optionally write to ``sink``) the CSV of all sections.

        Durations are reported in whole milliseconds.  Running sections
        contribute their accumulated time only.
        """
        with self._lock:
            sections = [TimingSection(s.name, s.wall_us, s.user_us, s.sys_us) for s in self._sections.values()]
        header = 'threads,ranks,'
        row = f'{self.threads},1'
        columns = []
        for s in sections:
            for measure, value in (('usr', s.user_us), ('wall', s.wall_us), ('sys', s.sys_us)):
                columns += [f'{s.name}_avg_{measure}', f'{s.name}_max_{measure}']
                ms = value // 1000
                row += f',{ms},{ms}'
        text = header + ','.join(columns) + '\n' + row + '\n'
        if sink is not None:
            sink.write(text)
        return text


_timings = Timings()


def timings():
    """The process-wide :class:`Timings` instance."""
    return _timings


class ScopedTiming:
    """Guard that times the enclosed block in the global registry."""

    def __init__(self, name, registry=None):
        self.name = name
        self.registry = registry or _timings

    def __enter__(self):
        self.registry.start(self.name)
        return self

    def __exit__(self, *exc):
        self.registry.stop(self.name)
        return False


scoped_timing = ScopedTiming
