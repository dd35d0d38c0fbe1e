"""Exact computations with Camina p-groups of nilpotence class 2."""

__version__ = "0.1.0"
