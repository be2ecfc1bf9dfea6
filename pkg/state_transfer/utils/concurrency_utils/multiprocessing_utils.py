from concurrent.futures import ProcessPoolExecutor
import logging
import logging.handlers
from multiprocessing import Manager

from state_transfer.sweep import evaluate_chunk, SweepConfig
from state_transfer.utils.concurrency_utils.base_concurrency_utils import BaseSweepRunner


class MultiprocessingSweepRunner(BaseSweepRunner):
    concurrency_mode = 'multiprocessing'

    def __init__(self, sweep_config, workers: int | None = None):
        super().__init__(sweep_config, workers)
        self.manager = Manager()

    def create_queue(self):
        return self.manager.Queue()

    def evaluate_chunks_concurrent(self) -> dict[int, list]:
        # qlistener in the main process, qhandlers in the worker processes
        log_queue = self.create_queue()
        qlistener = logging.handlers.QueueListener(log_queue, *self.logger.handlers, respect_handler_level=True)
        qlistener.start()

        chunks_count = len(self.chunks)
        try:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                futures = {
                    chunk_index: executor.submit(
                        MultiprocessingSweepRunner.evaluate_chunk, chunk_index, chunk, chunks_count,
                        self.sweep_config, log_queue, self.logger.getEffectiveLevel()
                    )
                    for chunk_index, chunk in enumerate(self.chunks)
                }
            # Raise any exceptions from the ProcessPoolExecutor
            return {chunk_index: future.result() for chunk_index, future in futures.items()}
        finally:
            qlistener.stop()
            self.manager.shutdown()

    @staticmethod
    def evaluate_chunk(
        chunk_index: int, chunk: list, chunks_count: int, sweep_config: SweepConfig, log_queue, log_level: int
    ) -> list:
        logger = BaseSweepRunner.setup_logger(queue=log_queue, level=log_level)
        try:
            rows = evaluate_chunk(chunk, sweep_config)
        except Exception as chunk_err:
            logger.error(f'Error in chunk {chunk_index + 1}/{chunks_count}: {chunk_err}')
            raise
        BaseSweepRunner.log_chunk_completion(logger, chunk_index, chunks_count)
        return rows
