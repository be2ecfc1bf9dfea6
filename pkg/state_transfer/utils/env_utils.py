import os

PROJECT_MODE = os.getenv('PROJECT_MODE', 'dev')


def get_worker_count(default_workers: int) -> int:
    """PST_WORKERS overrides the configured worker count."""
    pst_workers = os.getenv('PST_WORKERS')
    if pst_workers is None or not pst_workers.strip():
        return default_workers

    return max(1, int(pst_workers))
