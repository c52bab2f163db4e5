import math
import shutil
import sys
import threading
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, TypeVar

T = TypeVar("T")


@dataclass
class ProgressBar:
    """
    Progress on stderr; safe to increment from worker threads.
    """

    size: int
    enabled: bool = True

    state: int = field(default=0)

    _cli_width: int = field(default=0, init=False)
    _reserved_space: int = field(default=0, init=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False)

    def __post_init__(self):
        self._cli_width = min(shutil.get_terminal_size((80, 20)).columns, 100)
        # [] + " " + n/size + () + " "
        digits = math.ceil(math.log10(self.size + 1)) if self.size else 1
        self._reserved_space = 2 + 1 + digits * 2 + 1 + 2 + 1

    def increment(self):
        with self._lock:
            self.state += 1
            self._draw()

    def _draw(self):
        if not self.enabled:
            return
        if self.state >= self.size:
            print("\rdone!" + " " * (self._cli_width - 5), file=sys.stderr, flush=True)
            return
        width = self._cli_width - self._reserved_space
        digits = math.ceil(math.log10(self.size + 1))
        bar = "=" * int(width * self.state / self.size)
        print(f"\r[{bar:<{width}}] ({self.state:>{digits}}/{self.size})", end="", file=sys.stderr, flush=True)


def sweep(fn: Callable[[Any], T], items: Iterable[Any], workers: int = 4, show: bool = False) -> list[T]:
    """
    Evaluate fn on every item in a thread pool; results come back in input order.
    """
    items = list(items)
    bar = ProgressBar(len(items), enabled=show and sys.stderr.isatty())

    def run(item):
        result = fn(item)
        bar.increment()
        return result

    if workers <= 1:
        return [run(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, items))
