from __future__ import annotations

import logging
from pathlib import Path

from qrclab.backend import get_backend
from qrclab.logging_utils import (
    LoggingSettings,
    configure_logging,
    get_log_file_path,
    get_logger,
    log_environment,
    reset_logging,
)


def test_configure_logging_writes_file(tmp_path: Path, monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_FILE", str(tmp_path / "run.log"))
    reset_logging()
    logger = configure_logging(level="DEBUG", console=False, force=True)
    logger.debug("hello from test")
    file_path = tmp_path / "run.log"
    logger.handlers[0].flush()
    assert file_path.exists()
    contents = file_path.read_text()
    assert "hello from test" in contents


def test_get_logger_child_inherits_config(monkeypatch, tmp_path: Path):
    monkeypatch.setenv("QRCLAB_LOG_FILE", str(tmp_path / "child.log"))
    reset_logging()
    base = configure_logging(level=logging.INFO, console=False, force=True)
    child = get_logger("test.child")
    child.info("child message")
    for handler in base.handlers:
        handler.flush()
    data = (tmp_path / "child.log").read_text()
    assert "child message" in data
    assert "qrclab.test.child" in data


def test_empty_log_file_disables_file_logging(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_FILE", "")
    reset_logging()
    logger = configure_logging(console=False, force=True)
    assert logger.handlers == []
    assert get_log_file_path() is None


def test_level_from_environment(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_FILE", "")
    monkeypatch.setenv("QRCLAB_LOG_LEVEL", "warning")
    reset_logging()
    logger = configure_logging(console=False, force=True)
    assert logger.level == logging.WARNING


def test_configure_is_idempotent(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_FILE", "")
    reset_logging()
    first = configure_logging(console=True)
    second = configure_logging(console=True)
    assert first is second
    assert len(second.handlers) == 1


def test_log_environment_emits_structured_record(monkeypatch, tmp_path: Path):
    monkeypatch.setenv("QRCLAB_LOG_FILE", str(tmp_path / "env.log"))
    reset_logging()
    logger = configure_logging(level="INFO", console=False, force=True)
    records: list[logging.LogRecord] = []

    class _Collector(logging.Handler):
        def emit(self, record: logging.LogRecord) -> None:
            records.append(record)

    logger.addHandler(_Collector())
    log_environment(logger, component="tests", extra_keys=[("run", "abc")])
    assert records[0].getMessage() == "Runtime environment"
    assert records[0].component == "tests"
    assert records[0].run == "abc"
    assert records[0].backend == get_backend().name


def test_reset_restores_propagation(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_FILE", "")
    configure_logging(console=False, force=True)
    assert logging.getLogger("qrclab").propagate is False
    reset_logging()
    assert logging.getLogger("qrclab").propagate is True


def test_settings_default_file_under_log_dir(monkeypatch, tmp_path: Path):
    monkeypatch.delenv("QRCLAB_LOG_FILE", raising=False)
    monkeypatch.setenv("QRCLAB_LOG_DIR", str(tmp_path / "logs"))
    settings = LoggingSettings.from_env(console=False)
    assert settings.log_file == tmp_path / "logs" / "qrclab.log"


def test_settings_rotation_from_environment(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_MAX_BYTES", "1024")
    monkeypatch.setenv("QRCLAB_LOG_BACKUPS", "not-a-number")
    settings = LoggingSettings.from_env(log_file="")
    assert settings.max_bytes == 1024
    assert settings.backups == 3
    assert settings.log_file is None


def test_settings_explicit_arguments_win(monkeypatch):
    monkeypatch.setenv("QRCLAB_LOG_LEVEL", "ERROR")
    monkeypatch.setenv("QRCLAB_LOG_CONSOLE", "0")
    settings = LoggingSettings.from_env(level="debug", console=True, log_file="")
    assert settings.level == logging.DEBUG
    assert settings.console is True
    assert [type(h) for h in settings.handlers()] == [logging.StreamHandler]
