"""Run history management."""
from .database import RunHistory

__all__ = ["RunHistory"]
