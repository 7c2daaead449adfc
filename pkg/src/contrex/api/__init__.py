"""CLI and HTTP service."""
