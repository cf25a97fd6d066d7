import logging

from src.logger.logger import Logger


def test_one_logger_per_name():
    assert Logger("tests.logger.a") is Logger("tests.logger.a")
    assert Logger("tests.logger.a") is not Logger("tests.logger.b")


def test_set_level_reaches_existing_and_later_loggers():
    existing = Logger("tests.logger.existing")
    try:
        Logger.set_level(logging.WARNING)
        assert existing.logger.level == logging.WARNING
        assert Logger("tests.logger.later").logger.level == logging.WARNING
    finally:
        Logger.set_level(logging.INFO)
    assert existing.logger.level == logging.INFO


def test_records_go_to_a_single_stderr_handler():
    first = Logger("tests.logger.handlers")
    Logger("tests.logger.handlers")
    handlers = first.logger.handlers
    assert len(handlers) == 1
    assert isinstance(handlers[0], logging.StreamHandler)
    assert not first.logger.propagate
