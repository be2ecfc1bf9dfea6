# Different implementations of the concurrent sweep evaluation

from abc import ABC, abstractmethod
import logging
import logging.handlers
from queue import Queue
from typing import Dict, Sequence

from django.conf import settings

from state_transfer.utils.message_themes import info as info_messages

SWEEP_CHUNK_SIZE = settings.SWEEP_CHUNK_SIZE
SWEEP_WORKERS = settings.SWEEP_WORKERS
VERBOSE_SWEEP_LOGGING = settings.VERBOSE_SWEEP_LOGGING

PROGRESS_LOGGER_NAME = 'state_transfer'


class BaseSweepRunner(ABC):
    concurrency_mode = ''

    def __init__(self, sweep_config, workers: int | None = None):
        self.sweep_config = sweep_config
        self.workers = max(1, workers or SWEEP_WORKERS)
        self.chunks = self.split_into_chunks(sweep_config.grid_points(), SWEEP_CHUNK_SIZE)
        self.logger = logging.getLogger(PROGRESS_LOGGER_NAME)

    @abstractmethod
    def evaluate_chunks_concurrent(self) -> Dict[int, list]:
        pass

    def run(self) -> list:
        """Rows re-assembled in grid order, independent of the worker count."""
        points_count = sum(len(chunk) for chunk in self.chunks)
        self.logger.info(info_messages.sweep_started(points_count, self.workers, self.concurrency_mode))

        chunk_results = self.evaluate_chunks_concurrent()

        return [row for chunk_index in range(len(self.chunks)) for row in chunk_results[chunk_index]]

    @staticmethod
    def split_into_chunks(points: Sequence, chunk_size: int) -> list[list]:
        chunk_size = max(1, chunk_size)
        return [list(points[start:start + chunk_size]) for start in range(0, len(points), chunk_size)]

    @staticmethod
    def setup_logger(queue: Queue | None = None, level: int = logging.INFO) -> logging.Logger:
        """
        Worker logger. Process pool workers log through a queue, drained by a
        listener in the main process.
        """
        if queue is None:
            return logging.getLogger(f'{PROGRESS_LOGGER_NAME}.sweep')

        logger = logging.getLogger(f'{PROGRESS_LOGGER_NAME}.sweep.qhandler')
        logger.setLevel(level)
        logger.propagate = False
        if not any(isinstance(handler, logging.handlers.QueueHandler) for handler in logger.handlers):
            # Records are formatted by the main process handlers
            logger.addHandler(logging.handlers.QueueHandler(queue))

        return logger

    @staticmethod
    def log_chunk_completion(logger: logging.Logger, chunk_index: int, chunks_count: int) -> None:
        if VERBOSE_SWEEP_LOGGING:
            logger.info(info_messages.sweep_chunk_finished(chunk_index + 1, chunks_count))
