from concurrent.futures import ThreadPoolExecutor

from state_transfer.sweep import evaluate_chunk
from state_transfer.utils.concurrency_utils.base_concurrency_utils import BaseSweepRunner


class ThreadingSweepRunner(BaseSweepRunner):
    concurrency_mode = 'threading'

    def evaluate_chunks_concurrent(self) -> dict[int, list]:
        worker_logger = BaseSweepRunner.setup_logger()
        chunks_count = len(self.chunks)

        with ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix='SweepWorker') as executor:
            futures = {
                chunk_index: executor.submit(self.evaluate_chunk, chunk_index, chunk, chunks_count, worker_logger)
                for chunk_index, chunk in enumerate(self.chunks)
            }

        # Raise any exceptions from the ThreadPoolExecutor
        return {chunk_index: future.result() for chunk_index, future in futures.items()}

    def evaluate_chunk(self, chunk_index: int, chunk: list, chunks_count: int, logger) -> list:
        rows = evaluate_chunk(chunk, self.sweep_config)
        BaseSweepRunner.log_chunk_completion(logger, chunk_index, chunks_count)
        return rows
