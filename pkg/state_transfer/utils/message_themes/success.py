VALIDATION_PASSED = 'All validation checks passed.'


def check_passed(check_name: str, max_deviation: float, tolerance: float) -> str:
    return f'{check_name}: max deviation {max_deviation:.3e} <= {tolerance:.3e}'
