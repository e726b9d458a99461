"""
matroidlab Performance Monitor - operation timing and process resource sampling
"""

import logging
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, Optional

import psutil


@dataclass
class PerformanceThresholds:
    """Slow-operation and resource alert thresholds"""
    operation_warning_s: float = 60.0
    operation_critical_s: float = 600.0
    rss_warning_mb: float = 2048.0
    rss_critical_mb: float = 8192.0


class PerformanceMonitor:
    """Times named operations and samples process RSS/CPU at timer boundaries"""

    def __init__(self, logger_manager, thresholds: Optional[PerformanceThresholds] = None, event_logger=None):
        self.logger_manager = logger_manager
        self.event_logger = event_logger
        self.logger = logging.getLogger('matroidlab.performance')
        self.thresholds = thresholds or PerformanceThresholds()
        self.process = psutil.Process()

        self.samples = deque(maxlen=100)
        self.durations = deque(maxlen=100)
        self.active_timers: Dict[str, Dict[str, Any]] = {}

        self.stats = {
            'alerts_sent': 0,
            'monitoring_start': time.time(),
            'timed_operations': 0,
            'slow_operations': 0
        }

    def sample(self) -> Dict[str, float]:
        """Record current RSS and CPU time of this process"""
        try:
            with self.process.oneshot():
                rss_mb = self.process.memory_info().rss / (1024 ** 2)
                cpu = self.process.cpu_times()
            entry = {'timestamp': time.time(), 'rss_mb': rss_mb, 'cpu_user_s': cpu.user, 'cpu_system_s': cpu.system}
        except psutil.Error as e:
            self.logger.debug(f"psutil sample failed: {e}")
            return {}
        self.samples.append(entry)
        self.logger_manager.log_performance('rss_mb', rss_mb, 'MB')
        if rss_mb >= self.thresholds.rss_critical_mb:
            self._send_alert('rss_critical', rss_mb, self.thresholds.rss_critical_mb, 'critical')
        elif rss_mb >= self.thresholds.rss_warning_mb:
            self._send_alert('rss_warning', rss_mb, self.thresholds.rss_warning_mb, 'warning')
        return entry

    def start_timer(self, operation: str) -> str:
        """Start timing an operation"""
        timer_id = f"{operation}_{time.perf_counter_ns()}"
        self.active_timers[timer_id] = {
            'operation': operation,
            'start_time': time.perf_counter()
        }
        self.sample()
        return timer_id

    def end_timer(self, timer_id: str, context: Optional[Dict[str, Any]] = None) -> Optional[float]:
        """End timing and log the duration in seconds"""
        if timer_id not in self.active_timers:
            return None
        timer = self.active_timers.pop(timer_id)
        duration = time.perf_counter() - timer['start_time']
        operation = timer['operation']

        self.logger_manager.log_performance(f'{operation}_duration_s', duration, 'seconds', context)
        self.durations.append({'operation': operation, 'duration_s': duration})
        self.stats['timed_operations'] += 1
        self.sample()

        if duration >= self.thresholds.operation_warning_s:
            self.stats['slow_operations'] += 1
            severity = 'critical' if duration >= self.thresholds.operation_critical_s else 'warning'
            limit = self.thresholds.operation_critical_s if severity == 'critical' else self.thresholds.operation_warning_s
            self._send_alert(f'slow_{operation}', duration, limit, severity)
        return duration

    def _send_alert(self, metric: str, value: float, threshold: float, severity: str):
        self.stats['alerts_sent'] += 1
        if self.event_logger is not None:
            self.event_logger.log_performance_alert(metric, value, threshold, severity)
        self.logger_manager.log_performance(f'alert_{metric}', 1, 'count', {'value': value, 'severity': severity})
        if severity == 'critical':
            self.logger.critical(f"PERFORMANCE ALERT: {metric} = {value:.1f} (limit {threshold})")
        else:
            self.logger.warning(f"Performance Alert: {metric} = {value:.1f} (limit {threshold})")

    def get_stats(self) -> Dict[str, Any]:
        uptime = time.time() - self.stats['monitoring_start']
        peak_rss = max((s['rss_mb'] for s in self.samples), default=0.0)
        return {
            **self.stats,
            'uptime_seconds': uptime,
            'peak_rss_mb': peak_rss,
            'recent_operations': list(self.durations)[-10:]
        }
