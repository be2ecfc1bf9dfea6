# == Sweep ==
def sweep_started(points_count: int, workers: int, mode: str) -> str:
    return f'Sweep started: {points_count} grid points, {workers} workers ({mode}).'


def sweep_chunk_finished(chunk_index: int, chunks_count: int) -> str:
    return f'Chunk {chunk_index}/{chunks_count} finished.'


def sweep_results(filename: str, rows_count: int) -> str:
    return f'{rows_count} rows written to {filename}'


# == Distillation ==
def yield_clamped(k: float, f0: float) -> str:
    return f'Closed-form yield clamped at 0 for k={k}, F0={f0}.'


# == Fock space ==
def truncation_loss(loss: float) -> str:
    return f'Truncation dropped squared norm {loss:.3e}.'


def qutrit_leakage_discarded(weight: float) -> str:
    return f'Discarded multi-photon weight {weight:.3e} outside the path qutrits.'
