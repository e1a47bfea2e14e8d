import os
import logging
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from configs import paths

load_dotenv()

logger = logging.getLogger(__name__)

_MISSING = object()


class ConfigManager:
    """
    Manages loading of numeric defaults from external YAML files.
    Values are decoupled from code and stored under configs/.
    """

    def __init__(self, config_dir: Optional[str] = None):
        """
        Initialize ConfigManager.

        Args:
            config_dir: Directory containing YAML files.
                        If None, uses $HELLY_CONFIG_DIR, then configs/ of the project.
        """
        if config_dir:
            self.config_dir = str(config_dir)
        else:
            self.config_dir = os.getenv("HELLY_CONFIG_DIR", str(paths.CONFIG_ROOT))

        self.values: Dict[str, Any] = {}
        self._load_values()

    def _load_values(self):
        """Load all .yaml files from the config directory (alphabetical order, later files win)."""
        if not os.path.exists(self.config_dir):
            logger.warning(f"Config directory not found: {self.config_dir}")
            return

        for filename in sorted(os.listdir(self.config_dir)):
            if filename.endswith(".yaml") or filename.endswith(".yml"):
                file_path = os.path.join(self.config_dir, filename)
                try:
                    with open(file_path, 'r', encoding='utf-8') as f:
                        data = yaml.safe_load(f)
                    if data:
                        self._merge(self.values, data)
                        logger.debug(f"Loaded config from {filename}")
                except Exception as e:
                    logger.error(f"Failed to load config file {filename}: {e}")

    @staticmethod
    def _merge(target: Dict[str, Any], source: Dict[str, Any]):
        for key, value in source.items():
            if isinstance(value, dict) and isinstance(target.get(key), dict):
                ConfigManager._merge(target[key], value)
            else:
                target[key] = value

    def get(self, key: str, default: Any = _MISSING) -> Any:
        """
        Retrieve a value by dotted key, e.g. "geometry.tol".

        Raises:
            KeyError: If key is not found and no default is given.
        """
        node: Any = self.values
        for part in key.split("."):
            if isinstance(node, dict) and part in node:
                node = node[part]
            else:
                if default is _MISSING:
                    raise KeyError(f"Config key '{key}' not found in {self.config_dir}.")
                return default
        return node

    def reload(self):
        """Reload all values from disk."""
        self.values = {}
        self._load_values()


CONFIG = ConfigManager()
