"""Bundled MLNs and evidence files used by the golden tests and the verification suites."""
from pathlib import Path

from app.core.exceptions import ValidationException

DATA_DIR = Path(__file__).resolve().parent


def bundled_path(name: str) -> Path:
    path = DATA_DIR / name
    if not path.is_file():
        raise ValidationException(f"No bundled file named '{name}'", details={"name": name})
    return path


def bundled_text(name: str) -> str:
    return bundled_path(name).read_text(encoding="utf-8")
