"""
matroidlab Logger Manager - run directories and JSONL run records

One directory per CLI invocation under the configured log dir:

    <log_dir>/<YYYYmmdd_HHMMSS>_<pid>/
        events.jsonl       lifecycle events (EventLogger)
        results.jsonl      every Verdict / BoundReport / SolverResult / CriterionReport
        performance.jsonl  timings and RSS samples (PerformanceMonitor)
        errors.jsonl       errors mapped to exit codes by the CLI
        system.log         records of the `matroidlab` logger tree
        run_summary.json   written on close
    <log_dir>/latest -> most recent run directory
"""

import json
import logging
import logging.config
import os
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel

RECORD_FILES = {
    'events': 'events.jsonl',
    'results': 'results.jsonl',
    'performance': 'performance.jsonl',
    'errors': 'errors.jsonl',
}
SYSTEM_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class LoggerManager:
    """Owns the run directory of one invocation and appends its JSONL records"""

    def __init__(self, log_dir: Path, config_path: Optional[Path] = None):
        self.base_log_dir = Path(log_dir)
        self.run_timestamp = datetime.now().strftime("%Y%m%d_%H%M%S") + f"_{os.getpid()}"
        self.log_dir = self.base_log_dir / self.run_timestamp
        self.log_dir.mkdir(parents=True, exist_ok=True)

        self.record_paths = {stream: self.log_dir / name for stream, name in RECORD_FILES.items()}
        self.system_log = self.log_dir / "system.log"
        self.started = time.time()
        self.writes = {stream: 0 for stream in RECORD_FILES}
        self.write_failures = 0

        self._point_latest()
        self._file_handler = self._attach_system_log(config_path)
        self.logger = logging.getLogger('matroidlab.manager')
        self.logger.debug("run records in %s", self.log_dir)

    def _point_latest(self) -> None:
        latest = self.base_log_dir / 'latest'
        try:
            if latest.is_symlink() or latest.exists():
                latest.unlink()
            latest.symlink_to(self.run_timestamp)
        except OSError as e:
            logging.getLogger('matroidlab.manager').warning("could not update %s: %s", latest, e)

    def _attach_system_log(self, config_path: Optional[Path]) -> logging.Handler:
        """Apply the dictConfig document if present, then tee `matroidlab` records into system.log."""
        if config_path and Path(config_path).exists():
            with open(config_path) as f:
                logging.config.dictConfig(yaml.safe_load(f))
        else:
            logging.basicConfig(level=logging.INFO, format=SYSTEM_FORMAT)
        handler = logging.FileHandler(self.system_log)
        handler.setFormatter(logging.Formatter(SYSTEM_FORMAT))
        logging.getLogger('matroidlab').addHandler(handler)
        return handler

    def _write(self, stream: str, entry: Dict[str, Any]) -> None:
        entry = {'timestamp': time.time(), 't_seconds': time.time() - self.started, **entry}
        try:
            with open(self.record_paths[stream], 'a', encoding='utf-8') as f:
                f.write(json.dumps(entry, default=str) + '\n')
        except OSError as e:
            self.write_failures += 1
            self.logger.error("failed to write %s record: %s", stream, e)
            return
        self.writes[stream] += 1

    def log_event(self, event_type: str, message: str, data: Optional[Dict] = None):
        self._write('events', {
            'event_type': event_type,
            'message': message,
            'data': data or {},
            'iso_time': datetime.now().isoformat(),
        })

    def log_result(self, command: str, result: BaseModel, context: Optional[Dict] = None):
        """One line per result model, dumped in JSON mode so witnesses stay plain id lists"""
        self._write('results', {
            'command': command,
            'kind': type(result).__name__,
            'result': result.model_dump(mode="json"),
            'context': context or {},
        })

    def log_performance(self, metric_type: str, value: float, unit: str, context: Optional[Dict] = None):
        self._write('performance', {
            'metric_type': metric_type,
            'value': value,
            'unit': unit,
            'context': context or {},
        })

    def log_error(self, error_type: str, message: str, exception: Optional[Exception] = None, context: Optional[Dict] = None):
        self._write('errors', {
            'error_type': error_type,
            'message': message,
            'exception_type': type(exception).__name__ if exception else None,
            'context': context or {},
        })

    def get_stats(self) -> Dict[str, Any]:
        return {
            'run_directory': str(self.log_dir),
            'duration_seconds': time.time() - self.started,
            'writes': dict(self.writes),
            'write_failures': self.write_failures,
        }

    def create_run_summary(self, extra: Optional[Dict[str, Any]] = None):
        summary = {
            'run_timestamp': self.run_timestamp,
            **self.get_stats(),
            'record_files': sorted(p.name for p in self.log_dir.glob('*.jsonl')),
            **(extra or {}),
        }
        try:
            with open(self.log_dir / 'run_summary.json', 'w') as f:
                json.dump(summary, f, indent=2, default=str)
        except OSError as e:
            self.logger.error("failed to write run summary: %s", e)

    def close(self):
        """Detach the system.log handler so the next run in this process gets its own"""
        if self._file_handler is not None:
            logging.getLogger('matroidlab').removeHandler(self._file_handler)
            self._file_handler.close()
            self._file_handler = None
