"""Shared utilities used across multiple packages."""
