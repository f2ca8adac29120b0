"""
Unit tests for the parallel flux sweep runner.
"""

import threading
import time

import pytest

from src.exceptions import NumericError, RangeError
from src.services.sweep_runner import run_sweep


class TestRunSweep:
    """Test ordering and error propagation."""

    def test_serial(self):
        """Test a single-thread sweep."""
        assert run_sweep(lambda f: f * 2, [0.1, 0.2, 0.3]) == [0.2, 0.4, 0.6]

    def test_order_preserved_with_threads(self):
        """Test that slow early points still come back first."""
        def slow_square(x):
            time.sleep(0.01 * (5 - x))
            return x * x

        assert run_sweep(slow_square, range(6), threads=4) == [0, 1, 4, 9, 16, 25]

    def test_uses_workers(self):
        """Test that more than one thread evaluates points."""
        seen = set()

        def record(x):
            seen.add(threading.get_ident())
            time.sleep(0.02)
            return x

        run_sweep(record, range(8), threads=4)
        assert len(seen) > 1

    def test_empty(self):
        """Test an empty grid."""
        assert run_sweep(lambda f: f, [], threads=4) == []

    @pytest.mark.parametrize("threads", [1, 3])
    def test_domain_error_gets_flux_point(self, threads):
        """Test that package errors keep their type and gain the failing point."""
        def fail_at_half(f):
            if f == 0.5:
                raise RangeError("outside the bracket")
            return f

        with pytest.raises(RangeError) as excinfo:
            run_sweep(fail_at_half, [0.3, 0.5, 0.7], threads=threads, label="f_C")
        assert excinfo.value.details["flux_point"] == {"f_C": 0.5}

    @pytest.mark.parametrize("threads", [1, 3])
    def test_generic_error_wrapped(self, threads):
        """Test that foreign exceptions become NumericError."""
        def divide(f):
            return 1.0 / f

        with pytest.raises(NumericError) as excinfo:
            run_sweep(divide, [1.0, 0.0], threads=threads)
        assert excinfo.value.details["flux_point"] == {"f": 0.0}
        assert isinstance(excinfo.value.__cause__, ZeroDivisionError)
