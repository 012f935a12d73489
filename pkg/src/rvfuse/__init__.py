"""Trace-driven RV64GC instruction-stream analyzer with macro-op fusion detection."""

__version__ = "0.1.0"
