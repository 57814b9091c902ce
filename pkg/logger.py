# logger.py: Structured run log shared by every pipeline stage.
# A singleton `logger` appends timestamped `[LEVEL] [Component]` entries to a
# file; optional data is pretty-printed JSON and errors can carry a traceback.

import datetime
import json
import threading
import traceback
from typing import Any, List, Optional

import numpy as np

from config import LOG_FILE_PATH, LOG_LEVEL

LEVELS = {"DEBUG": 10, "INFO": 20, "WARN": 30, "ERROR": 40}
INDENT = "    "


def _json_default(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def _indented(text: str) -> List[str]:
    return [INDENT + line for line in text.splitlines()]


def format_entry(level: str, component: str, message: str, data: Any = None, trace: Optional[str] = None) -> str:
    """Renders one log entry; `data` falls back to repr-like text when JSON fails."""
    stamp = datetime.datetime.now().isoformat(sep=" ", timespec="milliseconds")
    head = f"[{stamp}] [{level:<5}] [{component:<18}]"
    lines = [f"{head} {message}" if message else head]
    if data is not None:
        try:
            payload = json.dumps(data, indent=4, ensure_ascii=False, default=_json_default)
        except (TypeError, OverflowError, ValueError):
            payload = str(data)
        lines.extend(_indented(payload))
    if trace:
        lines.append("--- TRACEBACK ---")
        lines.extend(_indented(trace))
        lines.append("-----------------")
    return "\n".join(lines) + "\n"


class SystemLogger:
    def __init__(self, log_file_path: str, min_level: str = "DEBUG"):
        self.log_file_path = log_file_path
        self.min_level = LEVELS.get(min_level, LEVELS["DEBUG"])
        self._handle = None
        self._lock = threading.Lock()

    def _write(self, level: str, component: str, message: str, data: Any, exc_info: bool = False):
        if LEVELS[level] < self.min_level:
            return
        entry = format_entry(level, component, message, data, traceback.format_exc() if exc_info else None)
        with self._lock:
            try:
                if self._handle is None or self._handle.closed:
                    self._handle = open(self.log_file_path, "a", encoding="utf-8")
                self._handle.write(entry)
                self._handle.flush()
            except OSError:
                # Logging failures never abort a run.
                pass

    def debug(self, component: str, message: str = "", data: Any = None):
        self._write("DEBUG", component, message, data)

    def info(self, component: str, message: str = "", data: Any = None):
        self._write("INFO", component, message, data)

    def warning(self, component: str, message: str = "", data: Any = None):
        self._write("WARN", component, message, data)

    def error(self, component: str, message: str = "", data: Any = None, exc_info: bool = False):
        self._write("ERROR", component, message, data, exc_info=exc_info)

    def redirect(self, log_file_path: Optional[str]):
        """Sends later entries to another file; None keeps the current one."""
        self.close()
        if log_file_path:
            self.log_file_path = log_file_path

    def close(self):
        with self._lock:
            if self._handle is not None and not self._handle.closed:
                self._handle.close()
            self._handle = None


logger = SystemLogger(LOG_FILE_PATH, LOG_LEVEL)
