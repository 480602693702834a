import copy
import hashlib
import logging
from typing import Any, List, Optional

import yaml

from .exceptions import ScenarioError
from .messages import Messages
from .validator import ScenarioFile

logger = logging.getLogger(__name__)


class Parser:

    @staticmethod
    def read_document(path: str) -> dict:
        """
        Reads a YAML scenario file into a plain mapping.

        Args:
          path: Scenario file path.

        Raises:
          ScenarioError: the file cannot be read, is not YAML, or is not a mapping.
        """
        try:
            with open(path, "r", encoding="utf-8") as handle:
                document = yaml.safe_load(handle)
        except (OSError, yaml.YAMLError) as e:
            raise ScenarioError(Messages.ERROR_SCENARIO_READ.format(path=path, reason=e)) from e

        if not isinstance(document, dict):
            raise ScenarioError(Messages.ERROR_SCENARIO_READ.format(path=path, reason="top level is not a mapping"))
        return document

    @staticmethod
    def parse_override(override: str):
        """Splits 'a.b.0.c=value' into (['a', 'b', '0', 'c'], parsed value)"""
        key, sep, raw = override.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override))
        try:
            value = yaml.safe_load(raw) if raw.strip() else None
        except yaml.YAMLError as e:
            raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override)) from e
        return key.split("."), value

    @staticmethod
    def apply_overrides(document: dict, overrides: Optional[List[str]] = None) -> dict:
        """
        Applies key=value overrides on dotted paths. Integer path parts index into lists; missing
        mapping keys are created.

        Returns:
          dict: A new document; the input is left untouched.
        """
        document = copy.deepcopy(document)
        for override in overrides or []:
            path, value = Parser.parse_override(override)
            node: Any = document
            for part in path[:-1]:
                node = Parser._step(node, part, override, create=True)
            Parser._assign(node, path[-1], value, override)
            logger.debug("🔧 Override %s", override)
        return document

    @staticmethod
    def _step(node, part: str, override: str, create: bool):
        if isinstance(node, list):
            index = Parser._index(node, part, override)
            return node[index]
        if isinstance(node, dict):
            if part not in node or node[part] is None:
                if not create:
                    raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override))
                node[part] = {}
            return node[part]
        raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override))

    @staticmethod
    def _assign(node, part: str, value, override: str) -> None:
        if isinstance(node, list):
            node[Parser._index(node, part, override)] = value
        elif isinstance(node, dict):
            node[part] = value
        else:
            raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override))

    @staticmethod
    def _index(node: list, part: str, override: str) -> int:
        try:
            index = int(part)
            node[index]
        except (ValueError, IndexError) as e:
            raise ScenarioError(Messages.ERROR_SCENARIO_OVERRIDE.format(override=override)) from e
        return index

    @staticmethod
    def load_scenario(path: str, command: Optional[str] = None, overrides: Optional[List[str]] = None) -> ScenarioFile:
        """
        Reads, overrides and validates a scenario.

        Args:
          path: Scenario file path.
          command: Sub-command being run; must match planner.mode when given.
          overrides: key=value strings applied before validation.

        Returns:
          ScenarioFile: The validated scenario.
        """
        document = Parser.apply_overrides(Parser.read_document(path), overrides)
        document.pop("command", None)
        if command is not None:
            document["command"] = command
        return ScenarioFile.parse_obj(document)

    @staticmethod
    def dump_scenario(scenario: ScenarioFile) -> str:
        """Canonical YAML form of a validated scenario"""
        return yaml.safe_dump(scenario.to_document(), sort_keys=True, default_flow_style=None)

    @staticmethod
    def scenario_hash(scenario: ScenarioFile) -> str:
        return hashlib.sha256(Parser.dump_scenario(scenario).encode("utf-8")).hexdigest()
