"""matroidlab logging - run records, lifecycle events and timing"""

from .logger_manager import LoggerManager
from .event_logger import EventLogger, EventType
from .performance_monitor import PerformanceMonitor, PerformanceThresholds

__all__ = [
    'LoggerManager',
    'EventLogger',
    'EventType',
    'PerformanceMonitor',
    'PerformanceThresholds'
]
