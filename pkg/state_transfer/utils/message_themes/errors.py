from typing import Any

# ====== Serializers ======
P_OR_DISTANCE_REQUIRED = 'Provide either --p or both --gamma and --distance.'
P_AND_DISTANCE_EXCLUSIVE = '--p cannot be combined with --gamma/--distance.'
DEPOLARIZING_AND_DEPHASING_EXCLUSIVE = 'Depolarizing (--p/--gamma/--distance) and dephasing (--beta1/--beta2) are exclusive.'
INVALID_CONFIG_FILE_FORMAT = 'Invalid config file format - a YAML mapping is required.'


def ensure_value_greater_than_or_equal_to(limit: Any) -> str:
    return f'Ensure this value is greater than or equal to {limit}.'


def range_requires_steps(range_name: str) -> str:
    return f'{range_name}: at least 2 steps are required.'


def range_min_greater_than_max(range_name: str, range_min: float, range_max: float) -> str:
    return f'{range_name}: minimum {range_min} is greater than maximum {range_max}.'


def config_file_not_found(config_path: str) -> str:
    return f'Config file not found: {config_path}.'


def unknown_config_keys(keys: list[str]) -> str:
    return f'Unknown config keys: {keys}.'


def invalid_options(errors: Any) -> str:
    return f'Invalid options: {errors}'


# ====== Serializers (end) ======
# ====== Fock space ======
def occupation_out_of_range(mode: str, count: int, n_max: int) -> str:
    return f'Occupation {count} of mode {mode} is outside [0, {n_max}].'


def pump_regime_violated(g_pump: float, bound: float) -> str:
    return f'Pump regime violated: |g * pump| = {g_pump:.3e} exceeds {bound}.'


def coupling_out_of_range(g: float) -> str:
    return f'Coupling g = {g} must be real with |g| < 1.'


def mixed_couplings(state_g: float, new_g: float) -> str:
    return f'State was expanded in g = {state_g}; cannot apply a crystal with g = {new_g}.'


def non_unitary_rotation(deviation: float, tolerance: float) -> str:
    return f'Rotation is not unitary: |u†u - 1| = {deviation:.3e} > {tolerance:.1e}.'


def invalid_path(path: Any) -> str:
    return f'Invalid path {path} - must be 1 or 2.'


def oracle_dimension_exceeded(dimension: int, max_dimension: int) -> str:
    return f'Oracle Hilbert space dimension {dimension} exceeds the limit {max_dimension}.'


def unsupported_subspace(offending: list[str], weight: float) -> str:
    return f'States outside the path qutrit subspace (weight {weight:.3e}): {offending}.'


# ====== Fock space (end) ======
# ====== Channels ======
def parameter_out_of_range(name: str, value: float, low: float, high: float) -> str:
    return f'{name} = {value} is outside [{low}, {high}].'


def negative_parameter(name: str, value: float) -> str:
    return f'{name} = {value} must be non-negative.'


def unknown_channel_kind(kind: str) -> str:
    return f'Unknown channel kind: {kind}.'


def channel_not_cp(channel: str, min_eigenvalue: float) -> str:
    return f'Channel {channel} is not completely positive: Choi eigenvalue {min_eigenvalue:.3e}.'


def invalid_density(reason: str) -> str:
    return f'Invalid density matrix: {reason}.'


# ====== Channels (end) ======
# ====== Protocol ======
PROTOCOL_PRESET_REQUIRED = (
    'Alice settings must cancel the V1 V2 pair term: preset b1 = 1, A = a2, phi = pi '
    '(or the alternative b1 = a2, A = 1, phi = pi).'
)
ZERO_POSTSELECTION = 'Zero post-selection probability - no heralding pattern can occur.'


def invalid_qubit(theta_deg: float, phi_q: float) -> str:
    return f'Invalid qubit: theta = {theta_deg} deg must lie in [0, 90], phi_q = {phi_q} in [0, 2pi).'


def invalid_alice_settings(reason: str) -> str:
    return f'Invalid Alice settings: {reason}.'


def degenerate_adder_output(a1: complex, mixed: complex) -> str:
    return f'Adder output has zero norm (a1 = {a1}, a2 + f = {mixed}).'


def zero_a2_regulation(theta_deg: float) -> str:
    return f'Pump regulation undefined for a2 = 0 (theta = {theta_deg} deg).'


# ====== Protocol (end) ======
# ====== Distillation ======
def matching_failed(p: float, yield_at_max: float, target: float, k_max: float) -> str:
    return (
        f'No resource-matching root in [0, {k_max}] for p = {p}: '
        f'yield({k_max}) = {yield_at_max:.3e}, target = {target:.3e}.'
    )


def threshold_not_bracketed(h_low: float, h_high: float) -> str:
    return f'Advantage threshold not bracketed: h(low) = {h_low:.3e}, h(high) = {h_high:.3e}.'


# ====== Distillation (end) ======
# ====== Commands ======
def unknown_concurrency_mode(mode: str) -> str:
    return f'Unknown CONCURRENT_SIMULATION_MODE: {mode} - use threading or multiprocessing.'


def unknown_output_format(output_format: str) -> str:
    return f'Unknown output format: {output_format} - use csv or json.'


def unwritable_output(path: str, reason: str) -> str:
    return f'Cannot write output file {path}: {reason}'


def command_failed(command: str, error_id: str) -> str:
    return f'{command} failed (error id {error_id}) - check the error logs.'


def validation_checks_failed(failed: list[str]) -> str:
    return f'Validation failed: {failed}'


# ====== Commands (end) ======
