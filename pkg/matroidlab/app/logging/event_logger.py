"""
matroidlab Event Logger - command lifecycle and harness outcome logging
"""

import logging
import time
from collections import Counter
from enum import Enum
from typing import Any, Dict, List, Optional

from ..version import get_version


class EventType(Enum):
    """Lifecycle events of a matroidlab run"""
    STARTUP = "startup"
    SHUTDOWN = "shutdown"
    COMMAND = "command"
    HARNESS_RESULT = "harness_result"
    COUNTEREXAMPLE = "counterexample"
    SOLVER_RUN = "solver_run"
    FILE_IO = "file_io"
    PERFORMANCE_ALERT = "performance_alert"


# Console level per event type; anything unlisted goes out at DEBUG.
EVENT_LEVELS = {
    EventType.COUNTEREXAMPLE: logging.WARNING,
    EventType.PERFORMANCE_ALERT: logging.WARNING,
    EventType.HARNESS_RESULT: logging.INFO,
    EventType.SOLVER_RUN: logging.INFO,
}


class EventLogger:
    """Writes events.jsonl entries and mirrors them to the `matroidlab.events` logger"""

    def __init__(self, logger_manager):
        self.logger_manager = logger_manager
        self.logger = logging.getLogger('matroidlab.events')
        self.started = time.time()
        self.session_id = int(self.started)
        self.counts: Counter = Counter()
        self.log_startup()

    def log_startup(self):
        self._emit(EventType.STARTUP, "matroidlab run started", {'version': get_version()})

    def log_shutdown(self, exit_code: int):
        self._emit(
            EventType.SHUTDOWN,
            f"matroidlab run finished with exit code {exit_code}",
            {
                'exit_code': exit_code,
                'uptime_seconds': time.time() - self.started,
                'event_counts': {t.value: self.counts[t] for t in EventType},
            },
        )

    def log_command(self, name: str, params: Dict[str, Any]):
        """Effective RunConfig of the subcommand, after flags are merged over settings"""
        self._emit(EventType.COMMAND, f"command {name}", {'command': name, 'params': params})

    def log_harness_result(self, check: str, status: str, details: Optional[Dict[str, Any]] = None):
        self._emit(EventType.HARNESS_RESULT, f"{check}: {status}", {'check': check, 'status': status, **(details or {})})

    def log_counterexample(self, check: str, witness: Dict[str, List[int]]):
        self._emit(EventType.COUNTEREXAMPLE, f"counterexample for {check}: {witness}", {'check': check, 'witness': witness})

    def log_solver_run(self, command: Optional[str], status: str, wall_time_s: float, diagnostics: Optional[str] = None):
        self._emit(
            EventType.SOLVER_RUN,
            f"solver returned {status} after {wall_time_s:.2f}s",
            {'solver': command, 'status': status, 'wall_time_s': wall_time_s, 'diagnostics': diagnostics},
        )

    def log_file_io(self, path: str, mode: str, ok: bool = True, error: Optional[str] = None):
        self._emit(EventType.FILE_IO, f"{mode} {path}", {'path': path, 'mode': mode, 'ok': ok, 'error': error})

    def log_performance_alert(self, metric: str, value: float, threshold: float, severity: str):
        self._emit(
            EventType.PERFORMANCE_ALERT,
            f"{severity} {metric}={value:.1f} (limit {threshold})",
            {'metric': metric, 'value': value, 'threshold': threshold, 'severity': severity},
        )

    def _emit(self, event_type: EventType, message: str, data: Dict[str, Any]):
        self.counts[event_type] += 1
        data = {**data, 'session_id': self.session_id, 'sequence': self.counts[event_type]}
        self.logger_manager.log_event(event_type.value, message, data)
        self.logger.log(EVENT_LEVELS.get(event_type, logging.DEBUG), "[%s] %s", event_type.value.upper(), message)
