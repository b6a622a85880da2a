"""Bundled Three Hearts 2012 case-study data (43 segments)."""

from importlib import resources


def splits_path():
    """Filesystem path to the bundled splits CSV."""
    return resources.files(__package__) / "three_hearts_2012_splits.csv"


def bounds_path():
    """Filesystem path to the bundled capacity bounds CSV."""
    return resources.files(__package__) / "three_hearts_2012_bounds.csv"


def splits_bytes() -> bytes:
    return splits_path().read_bytes()


def bounds_bytes() -> bytes:
    return bounds_path().read_bytes()
