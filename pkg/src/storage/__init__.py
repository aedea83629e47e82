"""Run-directory persistence between CLI stages."""

from storage.store import RunStore

__all__ = ["RunStore"]
