from .config import RunConfig, config_from_json, config_to_json, load_config, save_config

__all__ = [
    "RunConfig", "config_from_json", "config_to_json", "load_config", "save_config",
]
