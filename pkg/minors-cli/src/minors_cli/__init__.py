__all__ = [
    "ConfigError",
    "EmitError",
    "OutputFormat",
    "constants_table",
    "emit",
    "parse_config",
    "write_manifest",
]

from minors_cli.config import parse_config
from minors_cli.emit import OutputFormat, emit, write_manifest
from minors_cli.exceptions import ConfigError, EmitError
from minors_cli.tables import constants_table
