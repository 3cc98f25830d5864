"""Bundled benchmark fixtures: the Graph Product Line model and ten
synthetic models, each paired with a seeded prioritized-products file."""

from importlib import resources
from pathlib import Path


def path(name: str) -> Path:
    """Filesystem path of a bundled fixture, e.g. ``path('gpl.fm')``."""
    p = resources.files(__package__) / name
    return Path(str(p))


def benchmark_names() -> list[str]:
    """Stems of the bundled benchmark model/pp pairs (GPL first)."""
    names = ["gpl"] + sorted(
        entry.name[: -len(".fm")]
        for entry in (resources.files(__package__) / "bench").iterdir()
        if entry.name.endswith(".fm")
    )
    return names


def benchmark_pair(name: str) -> tuple[Path, Path]:
    sub = "" if name == "gpl" else "bench/"
    return path(f"{sub}{name}.fm"), path(f"{sub}{name}.pp")
