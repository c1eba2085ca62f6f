import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from astveil.graphs import SourceUnit, parse_source  # noqa: E402


def parse(language: str, text: str, uid: str = "u"):
    unit = SourceUnit(uid, language, text)
    return unit, parse_source(unit)
