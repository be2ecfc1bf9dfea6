from typing import Type

from state_transfer.utils.concurrency_utils.base_concurrency_utils import BaseSweepRunner


def get_sweep_runner(concurrency_mode: str) -> Type[BaseSweepRunner]:
    if concurrency_mode.startswith('threading'):
        from state_transfer.utils.concurrency_utils.threading_utils import ThreadingSweepRunner
        return ThreadingSweepRunner
    if concurrency_mode.startswith('multiprocessing'):
        from state_transfer.utils.concurrency_utils.multiprocessing_utils import MultiprocessingSweepRunner
        return MultiprocessingSweepRunner

    from state_transfer.utils.error_utils import ConfigurationError
    from state_transfer.utils.message_themes import errors as error_messages
    raise ConfigurationError(error_messages.unknown_concurrency_mode(concurrency_mode))
