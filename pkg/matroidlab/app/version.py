from __future__ import annotations

from functools import lru_cache
from pathlib import Path

VERSION_FILE = Path(__file__).with_name("VERSION")
FALLBACK_VERSION = "0.0.0"


@lru_cache(maxsize=1)
def get_version() -> str:
    """Version string from the VERSION file beside this module."""
    try:
        text = VERSION_FILE.read_text().strip()
    except OSError:
        return FALLBACK_VERSION
    return text or FALLBACK_VERSION
