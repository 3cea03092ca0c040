import json
import logging
from pathlib import Path
from typing import Optional

from rackbench.config import get_settings
from rackbench.errors import InputParseError
from rackbench.utils.algebra import FiniteMagma
from rackbench.utils.io import magma_from_json, parse_labeled_text
from rackbench.utils.labeled import LabeledDigraph

logger = logging.getLogger(__name__)

_REPO_ROOT = Path(__file__).resolve().parents[2]


class FixturesService:
    """Service for loading the bundled worked examples."""

    def __init__(self):
        self.settings = get_settings()
        self._examples: Optional[dict[str, dict]] = None

    @property
    def data_dir(self) -> Path:
        path = Path(self.settings.fixtures_path)
        if not path.is_absolute() and not path.exists():
            path = _REPO_ROOT / path
        return path

    def load(self, force_refresh: bool = False) -> dict[str, dict]:
        """Read every ``*.json`` example once and cache it by name."""
        if self._examples is not None and not force_refresh:
            return self._examples

        examples = {}
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as e:
                logger.error("Error reading example %s: %s", path.name, e)
                continue
            examples[data.get("name", path.stem)] = data
        logger.debug("loaded %d examples from %s", len(examples), self.data_dir)
        self._examples = examples
        return examples

    def names(self) -> list[str]:
        return sorted(self.load())

    def get(self, name: str) -> dict:
        examples = self.load()
        if name not in examples:
            raise InputParseError(f"unknown example {name!r}; known: {', '.join(sorted(examples))}")
        return examples[name]

    def magma(self, name: str) -> FiniteMagma:
        return magma_from_json(self.get(name))

    def labeled(self, name: str) -> LabeledDigraph:
        path = self.data_dir / f"{name}.txt"
        if not path.exists():
            raise InputParseError(f"no labeled fixture {name!r}")
        return parse_labeled_text(path.read_text(encoding="utf-8"))


fixtures_service = FixturesService()
