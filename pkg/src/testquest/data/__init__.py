"""Bundled data files (the default achievement registry)."""
