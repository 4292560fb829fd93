"""
Run logging. Writes to logs/dirac_sharp.log (append).
No console output; report files and exit codes carry the results.
"""
from pathlib import Path
from datetime import datetime

from src.config_loader import get_path, load_config


def _log_dir(config: dict | None = None) -> Path:
    if config is None:
        config = load_config()
    logs_dir = get_path("logs_dir", config, default="logs")
    logs_dir.mkdir(parents=True, exist_ok=True)
    return logs_dir


def write_log(
    message: str,
    level: str = "INFO",
    config: dict | None = None,
) -> None:
    """Append one line to logs/dirac_sharp.log. Never raises."""
    try:
        logs_dir = _log_dir(config)
        log_file = logs_dir / "dirac_sharp.log"
        ts = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        line = f"{ts} [{level}] {message}\n"
        with open(log_file, "a", encoding="utf-8") as f:
            f.write(line)
    except Exception:
        pass


def log_success(command: str, out_path: str | None, config: dict | None = None) -> None:
    """Log a command that finished with every row passing."""
    write_log(f"SUCCESS | command={command} | out={out_path}", level="INFO", config=config)


def log_failure(command: str, failed_rows: int, config: dict | None = None) -> None:
    write_log(f"FAIL | command={command} | failed_rows={failed_rows}", level="WARNING", config=config)


def log_error(message: str, config: dict | None = None) -> None:
    """Log a configuration or library error."""
    write_log(f"ERROR | {message}", level="ERROR", config=config)


def log_skip(reason: str, config: dict | None = None) -> None:
    """Log skip (e.g. inequality trivial because the constant is zero)."""
    write_log(f"SKIP | {reason}", level="INFO", config=config)
