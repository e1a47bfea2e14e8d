from .config_manager import CONFIG, ConfigManager
