# Singular Drift Lab - Storage
from .result_writer import (
    FLOAT_FORMAT,
    LOCALTIME_HEADERS,
    PATH_HEADERS,
    path_frame,
    to_json,
    write_json,
    write_localtime_csv,
    write_path_csv,
    write_path_dumps,
    write_table_csv,
)

__all__ = [
    "FLOAT_FORMAT",
    "LOCALTIME_HEADERS",
    "PATH_HEADERS",
    "path_frame",
    "to_json",
    "write_json",
    "write_localtime_csv",
    "write_path_csv",
    "write_path_dumps",
    "write_table_csv",
]
