"""Discrete global clock driving periodic callbacks.

One tick is one time unit; wall-clock pacing is a presentation concern and
never enters here.  A listener with period p registered at time r fires at
every tick t with t >= r and (t - r) mod p == 0, including t == r, so the
first callback happens at registration time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import InvalidPeriod, UnknownListener


@dataclass
class _Entry:
    callback: Callable[[], None]
    period: int
    registered_at: int


class ClockSchedule:
    """Registry of (callback, period, registration-time) entries.

    Owned by the simulation loop; tick() must never be reentered.
    """

    def __init__(self, error_sink: Optional[Callable[[str, BaseException], None]] = None):
        self._now = 0
        self._entries: list[_Entry] = []
        self._in_tick = False
        self.error_sink = error_sink

    @property
    def now(self) -> int:
        return self._now

    def current_time(self) -> int:
        return self._now

    def add_listener(self, callback: Callable[[], None], period: int) -> None:
        if not isinstance(period, int) or period < 1:
            raise InvalidPeriod(f"period must be an integer >= 1, got {period!r}")
        self._entries.append(_Entry(callback, period, self._now))

    def remove_listener(self, callback: Callable[[], None]) -> None:
        """Drop every entry for this callback; it never fires on later ticks.

        A removal made inside an onClock callback takes effect next tick;
        the current tick iterates a snapshot of the entry list.
        """
        kept = [e for e in self._entries if e.callback != callback]
        if len(kept) == len(self._entries):
            raise UnknownListener(f"{callback!r} is not registered")
        self._entries = kept

    def has_listener(self, callback) -> bool:
        return any(e.callback == callback for e in self._entries)

    def tick(self, topology=None, mailroom=None,
             drain_commands: Optional[Callable[[], None]] = None,
             flush_deltas: Optional[Callable[[], None]] = None) -> None:
        """Execute one time unit in fixed phase order.

        (1) drain external commands, (2) deliver due envelopes, (3) fire due
        onClock callbacks over a snapshot of the entries in registration
        order, (4) flush viewer deltas, (5) advance the clock.
        """
        if self._in_tick:
            raise RuntimeError("tick() reentered")
        self._in_tick = True
        try:
            if drain_commands is not None:
                drain_commands()
            if mailroom is not None:
                mailroom.deliver_due(topology)
            for entry in list(self._entries):
                if self._now >= entry.registered_at and \
                        (self._now - entry.registered_at) % entry.period == 0:
                    self._run(entry.callback)
            if flush_deltas is not None:
                flush_deltas()
            self._now += 1
        finally:
            self._in_tick = False

    def _run(self, callback) -> None:
        try:
            callback()
        except Exception as exc:
            if self.error_sink is None:
                raise
            self.error_sink("clock:on_clock", exc)
