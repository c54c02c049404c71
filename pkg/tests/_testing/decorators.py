import os

import pytest

__all__ = [
    "skip_unless_slow",
]

_slow_tests_enabled = os.environ.get("DEHAZER_SLOW_TESTS") == "1"

skip_unless_slow = pytest.mark.skipif(not _slow_tests_enabled, reason="set DEHAZER_SLOW_TESTS=1")
